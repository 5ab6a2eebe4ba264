use serde::{Deserialize, Serialize};
use std::fmt;

macro_rules! doc_types {
    ($($variant:ident => $full:literal, $short:literal;)*) => {
        /// Document-type categories, most frequent first.
        #[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum DocType {
            $($variant,)*
            #[default]
            Unknown,
        }

        impl DocType {
            /// The 28 known categories in table order.
            pub const ALL: [DocType; 28] = [$(DocType::$variant,)*];

            /// Full type name as written in `DT` fields.
            pub fn name(self) -> &'static str {
                match self {
                    $(DocType::$variant => $full,)*
                    DocType::Unknown => "Unknown",
                }
            }

            /// Truncated label used in printed tables.
            pub fn table_label(self) -> &'static str {
                match self {
                    $(DocType::$variant => $short,)*
                    DocType::Unknown => "Unknown",
                }
            }
        }
    };
}

doc_types! {
    BookReview => "Book Review", "Book Review";
    Article => "Article", "Article";
    EditorialMaterial => "Editorial Material", "Editorial Mater";
    Poetry => "Poetry", "Poetry";
    ArtExhibitReview => "Art Exhibit Review", "Art Exhibit Rev";
    Letter => "Letter", "Letter";
    FilmReview => "Film Review", "Film Review";
    NewsItem => "News Item", "News Item";
    RecordReview => "Record Review", "Record Review";
    ProceedingsPaper => "Proceedings Paper", "Proceedings Paper";
    BiographicalItem => "Biographical-Item", "Biographical-Item";
    Review => "Review", "Review";
    MusicPerformanceReview => "Music Performance Review", "Music Performan";
    FictionCreativeProse => "Fiction, Creative Prose", "Fiction, Creative";
    DancePerformanceReview => "Dance Performance Review", "Dance Performance";
    TheaterReview => "Theater Review", "Theater Review";
    Correction => "Correction", "Correction";
    MusicScoreReview => "Music Score Review", "Music Score Rev";
    TvRadioReview => "TV Review, Radio Review", "TV Review, Radio";
    Bibliography => "Bibliography", "Bibliography";
    MeetingAbstract => "Meeting Abstract", "Meeting Abstract";
    Reprint => "Reprint", "Reprint";
    Excerpt => "Excerpt", "Excerpt";
    Script => "Script", "Script";
    SoftwareReview => "Software Review", "Software Review";
    MusicScore => "Music Score", "Music Score";
    DatabaseReview => "Database Review", "Database Review";
    HardwareReview => "Hardware Review", "Hardware Review";
}

impl DocType {
    /// Exact, case-insensitive match on either the full name or the table label.
    pub fn from_label(s: &str) -> DocType {
        let s = s.trim();
        DocType::ALL
            .iter()
            .copied()
            .find(|t| t.name().eq_ignore_ascii_case(s) || t.table_label().eq_ignore_ascii_case(s))
            .unwrap_or(DocType::Unknown)
    }

    /// The types ISI counts as citable items.
    pub fn is_citable(self) -> bool {
        matches!(
            self,
            DocType::Article | DocType::Review | DocType::Letter | DocType::ProceedingsPaper
        )
    }
}

impl fmt::Display for DocType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
