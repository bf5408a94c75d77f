pub const NORMAL_CDF: &[(f64, f64)] = &[
    (-8.0, 6.220960574271784e-16),
    (-5.0, 2.866515718791939e-07),
    (-3.3, 0.0004834241423837775),
    (-1.959964, 0.0249999990964424),
    (-1.0, 0.15865525393145705),
    (-0.25, 0.4012936743170763),
    (0.0, 0.5),
    (0.1, 0.539827837277029),
    (0.5, 0.6914624612740131),
    (1.0, 0.8413447460685429),
    (1.644854, 0.9500000384745869),
    (1.959964, 0.9750000009035577),
    (2.575829, 0.9949999956107591),
    (4.0, 0.9999683287581669),
    (6.5, 0.99999999995984),
];
pub const INC_GAMMA_P: &[(f64, f64, f64)] = &[
    (0.5, 0.1, 0.345279153981423),
    (0.5, 2.0, 0.9544997361036416),
    (1.0, 1.3862943611198906, 0.75),
    (1.0, 1000.0, 1.0),
    (1.5, 0.7, 0.29446526879590884),
    (2.0, 5.0, 0.9595723180054871),
    (2.5, 2.5, 0.5841198130044921),
    (3.0, 0.01, 1.654216528074877e-07),
    (4.0, 12.0, 0.9977082087922086),
    (5.0, 4.0, 0.37116306482012645),
    (7.5, 3.0, 0.020252253282186636),
    (10.0, 10.0, 0.5420702855281478),
    (20.0, 25.0, 0.8664251659143496),
    (0.1, 0.05, 0.7755386354510305),
    (50.0, 45.0, 0.24680203440017026),
    (100.0, 110.0, 0.8417213299399129),
    (1.0, 0.0, 0.0),
];
pub const INC_BETA: &[(f64, f64, f64, f64)] = &[
    (2.0, 3.0, 0.3, 0.3483),
    (0.5, 0.5, 0.2, 0.2951672353008666),
    (1.0, 1.0, 0.77, 0.77),
    (5.0, 5.0, 0.5, 0.5),
    (2.5, 0.5, 0.9, 0.48958974456442755),
    (0.5, 2.5, 0.05, 0.37018812880753554),
    (10.0, 3.0, 0.8, 0.5583457484800002),
    (3.0, 10.0, 0.1, 0.11086997774500001),
    (30.0, 0.5, 0.95, 0.08062942690643063),
    (0.5, 30.0, 0.01, 0.5606656310947488),
    (100.0, 100.0, 0.45, 0.07838793271222053),
    (4.0, 0.5, 0.999, 0.9308943095126206),
    (1.5, 7.0, 0.25, 0.7556911408901215),
    (20.0, 20.0, 0.6, 0.8979413687105917),
    (2.0, 2.0, 0.0, 0.0),
    (2.0, 2.0, 1.0, 1.0),
    (250.0, 0.5, 0.997, 0.22055547792739025),
    (0.8, 1.2, 0.33, 0.46613769432364893),
];
// total points: 50
