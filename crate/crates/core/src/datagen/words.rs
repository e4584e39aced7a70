//! Built-in word lists for synthetic field values. All names are invented.

pub const FIRST_NAMES: &[&str] = &[
    "Amara",
    "Benedikt",
    "Carmen",
    "Dmitri",
    "Elena",
    "Farid",
    "Greta",
    "Hiroshi",
    "Ingrid",
    "Jonas",
    "Keiko",
    "Leandro",
    "Maren",
    "Nikhil",
    "Olwen",
    "Priya",
    "Quentin",
    "Rosalind",
    "Santiago",
    "Tove",
    "Umar",
    "Valeria",
    "Wendell",
    "Ximena",
    "Yusuf",
    "Zofia",
    "Anneliese",
    "Bartholomew",
    "Chiara",
    "Desmond",
    "Esther",
    "Florian",
    "Ginevra",
    "Henrik",
    "Isolde",
    "Jasper",
    "Kalani",
    "Lorenzo",
    "Mireille",
    "Nadia",
];

pub const LAST_NAMES: &[&str] = &[
    "Abernathy",
    "Bergstrom",
    "Castellano",
    "Dubois",
    "Eriksen",
    "Fairweather",
    "Gallagher",
    "Hartmann",
    "Ishikawa",
    "Jovanovic",
    "Kowalczyk",
    "Lindqvist",
    "Moreau",
    "Nakamura",
    "Okonkwo",
    "Pellegrini",
    "Quist",
    "Rasmussen",
    "Sandoval",
    "Thorne",
    "Underwood",
    "Valdivia",
    "Whitlock",
    "Yamamoto",
    "Zimmermann",
    "Achebe",
    "Blackwood",
    "Cardenas",
    "Delacroix",
    "Ellington",
    "Fitzgerald",
    "Grimaldi",
    "Holloway",
    "Iverson",
    "Kavanagh",
    "Lockhart",
];

pub const CITIES: &[&str] = &[
    "Berlin",
    "Lisbon",
    "Toronto",
    "Melbourne",
    "Osaka",
    "Nairobi",
    "Montevideo",
    "Edinburgh",
    "Vancouver",
    "Copenhagen",
    "Wellington",
    "Porto",
    "Krakow",
    "Ljubljana",
    "Tallinn",
    "Valparaiso",
    "Seattle",
    "Austin",
    "Denver",
    "Rotterdam",
    "Gothenburg",
    "Lyon",
    "Bologna",
    "Cork",
];

pub const COUNTRIES: &[&str] = &[
    "Germany",
    "Portugal",
    "Canada",
    "Australia",
    "Japan",
    "Kenya",
    "Uruguay",
    "Scotland",
    "Denmark",
    "New Zealand",
    "Poland",
    "Slovenia",
    "Estonia",
    "Chile",
    "United States",
    "Netherlands",
    "Sweden",
    "France",
    "Italy",
    "Ireland",
];

pub const STREETS: &[&str] = &[
    "Maple",
    "Harbor",
    "Juniper",
    "Quarry",
    "Linden",
    "Orchard",
    "Beacon",
    "Willow",
    "Granite",
    "Meadowlark",
    "Chestnut",
    "Foundry",
    "Lantern",
    "Riverside",
    "Summit",
    "Tamarack",
];

pub const STREET_SUFFIXES: &[&str] = &[
    "Street", "Avenue", "Lane", "Road", "Court", "Way", "Terrace", "Place",
];

pub const ORG_STEMS: &[&str] = &[
    "Northwind",
    "Bluefin",
    "Copperleaf",
    "Ironbridge",
    "Lumen",
    "Silverline",
    "Tidewater",
    "Brightforge",
    "Cedarpoint",
    "Halcyon",
    "Kestrel",
    "Meridian",
    "Oakhaven",
    "Pinecrest",
    "Quillon",
    "Redstone",
    "Starling",
    "Vantage",
    "Wildmere",
    "Zephyr",
];

pub const ORG_SUFFIXES: &[&str] = &[
    "Labs",
    "Systems",
    "Analytics",
    "Partners",
    "Works",
    "Dynamics",
    "Collective",
    "Industries",
    "Group",
    "Studio",
];

pub const BANK_SUFFIXES: &[&str] = &[
    "Savings Bank",
    "Credit Union",
    "Trust",
    "Community Bank",
    "Federal Bank",
];

pub const UNIVERSITY_PATTERNS: &[&str] = &[
    "University of {city}",
    "{city} Institute of Technology",
    "{stem} College",
    "{stem} State University",
];

pub const HOSPITAL_PATTERNS: &[&str] = &[
    "{city} General Hospital",
    "{stem} Medical Center",
    "St. {last} Hospital",
    "{city} University Clinic",
];

pub const DEPARTMENTS: &[&str] = &[
    "Computer Science",
    "Mechanical Engineering",
    "Molecular Biology",
    "Economics",
    "Linguistics",
    "Physics",
    "Public Health",
    "Civil Engineering",
    "Mathematics",
    "Information Systems",
    "Chemistry",
    "Philosophy",
];

pub const MAJORS: &[&str] = &[
    "Computer Science",
    "Biochemistry",
    "Applied Mathematics",
    "Comparative Literature",
    "Economics",
    "Environmental Science",
    "Architecture",
    "Psychology",
    "Electrical Engineering",
    "History",
];

pub const JOB_TITLES: &[&str] = &[
    "Assistant Professor",
    "Research Scientist",
    "Lecturer",
    "Postdoctoral Fellow",
    "Lab Manager",
    "Data Analyst",
    "Software Engineer",
    "Project Coordinator",
    "Operations Manager",
    "Research Associate",
    "Teaching Fellow",
    "Product Designer",
];

pub const PROCEDURES: &[&str] = &[
    "Arthroscopic knee repair",
    "Laparoscopic cholecystectomy",
    "Cataract extraction",
    "Tonsillectomy",
    "Rotator cuff repair",
    "Appendectomy",
    "Carpal tunnel release",
    "Hernia repair",
];

pub const JURISDICTIONS: &[&str] = &[
    "State of Delaware",
    "State of California",
    "Province of Ontario",
    "England and Wales",
    "State of New York",
    "Commonwealth of Massachusetts",
    "State of Washington",
];

pub const OPERATING_SYSTEMS: &[&str] = &[
    "Windows 11",
    "Windows 10",
    "macOS 14",
    "macOS 13",
    "Ubuntu 22.04",
    "Ubuntu 24.04",
    "Fedora 40",
    "Debian 12",
];

pub const ADJECTIVES: &[&str] = &[
    "adaptive",
    "robust",
    "scalable",
    "collaborative",
    "sustainable",
    "interpretable",
    "efficient",
    "resilient",
    "community-driven",
    "low-cost",
    "open",
    "secure",
    "accessible",
    "data-driven",
    "modular",
    "quiet",
];

pub const NOUNS: &[&str] = &[
    "sensor networks",
    "urban gardens",
    "language models",
    "supply chains",
    "coastal ecosystems",
    "public libraries",
    "battery storage",
    "mobile clinics",
    "peer tutoring",
    "water filtration",
    "bike sharing",
    "archival records",
    "graph algorithms",
    "classroom tools",
    "solar microgrids",
    "rare manuscripts",
];

pub const VERBS: &[&str] = &[
    "improves",
    "supports",
    "simplifies",
    "evaluates",
    "extends",
    "documents",
    "connects",
    "measures",
    "protects",
    "accelerates",
];

pub const AUDIENCES: &[&str] = &[
    "small businesses",
    "rural communities",
    "graduate students",
    "local schools",
    "first-time renters",
    "field researchers",
    "hospital staff",
    "independent artists",
    "city planners",
    "volunteer groups",
];

pub const TITLE_HEADS: &[&str] = &[
    "Towards",
    "Rethinking",
    "Learning",
    "Scaling",
    "Understanding",
    "Measuring",
    "Designing",
    "Mapping",
];

pub const ART_WORDS: &[&str] = &[
    "Quiet",
    "Harbor",
    "Lanterns",
    "Salt",
    "Winter",
    "Glass",
    "Orchard",
    "Echoes",
    "Threshold",
    "Ember",
    "Tide",
    "Paper",
    "Moth",
    "Summer",
    "Cartography",
    "Hollow",
];

pub const FILE_STEMS: &[&str] = &[
    "final", "v2", "signed", "scan", "2024", "draft", "updated", "copy",
];
