pub const CASES: &[(&str, usize, u64, f64, f64)] = &[
    ("normal", 10, 11, 0.9438845672258391, 0.5969893586546027),
    ("normal", 10, 12, 0.8744059288862002, 0.1124751492421795),
    ("normal", 10, 13, 0.8432400370656311, 0.04824565055456363),
    ("uniform", 10, 14, 0.920860553854651, 0.36418822690314295),
    ("lognormal", 10, 15, 0.8785872634868492, 0.12570328286864224),
    ("normal", 50, 51, 0.9786378447616204, 0.4960539261943583),
    ("normal", 50, 52, 0.9674138771280453, 0.18129834948704387),
    ("normal", 50, 53, 0.9738316530781969, 0.3290038308409501),
    ("uniform", 50, 54, 0.9594138550323148, 0.08400495802085928),
    ("lognormal", 50, 55, 0.9479204466580843, 0.02804157901362144),
    ("normal", 500, 501, 0.9961419318200149, 0.2654431656751921),
    ("normal", 500, 502, 0.99734389591991, 0.6066951329688777),
    ("normal", 500, 503, 0.9984461378848135, 0.9405557853762221),
    ("uniform", 500, 504, 0.9577559205574503, 8.868041755647005e-11),
    ("lognormal", 500, 505, 0.9768082455992714, 3.941171890959188e-07),
    ("normal", 5000, 5001, 0.9996390678999058, 0.5233213898483513),
    ("normal", 5000, 5002, 0.9994608722777318, 0.16002182609587579),
    ("normal", 5000, 5003, 0.9989867053469101, 0.004023949553937964),
    ("uniform", 5000, 5004, 0.9563976429946699, 2.87311261919571e-36),
    ("lognormal", 5000, 5005, 0.9657069610180116, 6.621272931251917e-33),
];
