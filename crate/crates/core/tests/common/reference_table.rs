/// Published orbit table: `[m, Φ_1(m)/m, ..., Φ_5(m)/m, Ψ(m)/m]` for `m = 1..=31`.
pub const REFERENCE_TABLE: [[u64; 7]; 31] = [
    [1, 1, 1, 1, 1, 1, 2],
    [2, 1, 1, 1, 1, 1, 1],
    [3, 1, 0, 0, 0, 0, 2],
    [4, 1, 1, 1, 1, 1, 3],
    [5, 2, 1, 0, 0, 0, 6],
    [6, 2, 2, 2, 2, 2, 9],
    [7, 4, 2, 1, 0, 0, 18],
    [8, 5, 3, 3, 3, 3, 30],
    [9, 8, 4, 2, 1, 0, 56],
    [10, 11, 6, 6, 6, 6, 99],
    [11, 18, 8, 4, 2, 1, 186],
    [12, 25, 11, 9, 9, 9, 335],
    [13, 40, 16, 8, 4, 2, 630],
    [14, 58, 23, 18, 18, 18, 1161],
    [15, 90, 32, 16, 8, 4, 2182],
    [16, 135, 46, 32, 30, 30, 4080],
    [17, 210, 66, 32, 16, 8, 7710],
    [18, 316, 94, 61, 56, 56, 14560],
    [19, 492, 136, 64, 32, 16, 27594],
    [20, 750, 195, 115, 101, 99, 52377],
    [21, 1164, 282, 128, 64, 32, 99858],
    [22, 1791, 408, 224, 191, 186, 190557],
    [23, 2786, 592, 258, 128, 64, 364722],
    [24, 4305, 856, 431, 351, 337, 698870],
    [25, 6710, 1248, 520, 256, 128, 1342176],
    [26, 10420, 1814, 850, 668, 635, 2580795],
    [27, 16264, 2646, 1050, 512, 256, 4971008],
    [28, 25350, 3858, 1673, 1257, 1177, 9586395],
    [29, 39650, 5644, 2128, 1026, 512, 18512790],
    [30, 61967, 8246, 3328, 2402, 2220, 35790267],
    [31, 97108, 12088, 4320, 2056, 1024, 69273666],
];
