//! Bundled evaluation corpus: binary climber strings, random binary
//! sequences, and numeric sequences in three complexity classes.
//!
//! The loader in the parent module checksums this data on every load;
//! edits here will be rejected at runtime until the pinned digest is
//! regenerated. Duplicate rows are intentional and preserved.

pub(crate) const CLIMBERS: [&str; 24] = [
    "0000000", "0000000", "0000100", "00000100",
    "00000011", "00000001", "00000001", "00011000",
    "00100000", "01010101", "00001110", "000000010",
    "000000001", "000000001", "000001101", "010101010",
    "001010101", "011011011", "000000000", "001010110",
    "010100100", "010101101", "0001010101", "0101010101",
];

pub(crate) const BINARY_SEQUENCES: [&str; 100] = [
    "11000100001", "00010110101", "10000111100", "11111111010",
    "10110101010", "11100110110", "00111001011", "11100000000",
    "01111010111", "11000111011", "10011010001", "01110110110",
    "10100101011", "01100111100", "00111110111", "11101110010",
    "10101000000", "00111111011", "11000101010", "00000101101",
    "00111111001", "01001001011", "10011000000", "11011100111",
    "00000001000", "01001111110", "00100010000", "10001100110",
    "11001000000", "10101010011", "10110111110", "00000010000",
    "01100000001", "00110110110", "00001111101", "11100001111",
    "10100111111", "01000000101", "01000101110", "10101110101",
    "10000100111", "11000010001", "10100010100", "00111100101",
    "00000010001", "11110011100", "10101101011", "10010111111",
    "11111000111", "00010111001", "00101001000", "11100111011",
    "10011101111", "10010011001", "00000011011", "10011001111",
    "11111001000", "01110111111", "10100100110", "01000110011",
    "00000110110", "01001001001", "11100111110", "01010100110",
    "11101010000", "10001011110", "10100010110", "00100101101",
    "10010110011", "11001110010", "00101110011", "01110110111",
    "10000100101", "01111001000", "00000111010", "01010110011",
    "00010000101", "01100000110", "10010101100", "01011111010",
    "10010010110", "01010101110", "00100110100", "11000011111",
    "10110001001", "01110011000", "10111010101", "01010000001",
    "01000110100", "00101000111", "10111011101", "11110101001",
    "00110010101", "01101010111", "10101011001", "10111110111",
    "01010011010", "00010100111", "11100011111", "10001110110",
];

pub(crate) const NUMERIC_LOW: [&[i64]; 30] = [
    &[2, 4, 6, 8, 10, 12, 14, 16, 18, 20],
    &[3, 6, 9, 12, 15, 18, 21, 24, 27, 30],
    &[4, 8, 12, 16, 20, 24, 28, 32, 36, 40],
    &[5, 10, 15, 20, 25, 30, 35, 40, 45, 50],
    &[6, 12, 18, 24, 30, 36, 42, 48, 54, 60],
    &[7, 14, 21, 28, 35, 42, 49, 56, 63, 70],
    &[8, 16, 24, 32, 40, 48, 56, 64, 72, 80],
    &[9, 18, 27, 36, 45, 54, 63, 72, 81, 90],
    &[10, 20, 30, 40, 50, 60, 70, 80, 90, 100],
    &[1, 3, 5, 7, 9, 11, 13, 15, 17, 19],
    &[2, 4, 6, 8, 10, 12, 14, 16, 18, 20],
    &[11, 12, 13, 14, 15, 16, 17, 18, 19, 20],
    &[21, 22, 23, 24, 25, 26, 27, 28, 29, 30],
    &[31, 32, 33, 34, 35, 36, 37, 38, 39, 40],
    &[41, 42, 43, 44, 45, 46, 47, 48, 49, 50],
    &[51, 52, 53, 54, 55, 56, 57, 58, 59, 60],
    &[61, 62, 63, 64, 65, 66, 67, 68, 69, 70],
    &[71, 72, 73, 74, 75, 76, 77, 78, 79, 80],
    &[81, 82, 83, 84, 85, 86, 87, 88, 89, 90],
    &[91, 92, 93, 94, 95, 96, 97, 98, 99, 100],
    &[101, 102, 103, 104, 105, 106, 107, 108, 109, 110],
    &[111, 112, 113, 114, 115, 116, 117, 118, 119, 120],
    &[121, 122, 123, 124, 125, 126, 127, 128, 129, 130],
    &[131, 132, 133, 134, 135, 136, 137, 138, 139, 140],
    &[141, 142, 143, 144, 145, 146, 147, 148, 149, 150],
    &[151, 152, 153, 154, 155, 156, 157, 158, 159, 160],
    &[161, 162, 163, 164, 165, 166, 167, 168, 169, 170],
    &[171, 172, 173, 174, 175, 176, 177, 178, 179, 180],
    &[181, 182, 183, 184, 185, 186, 187, 188, 189, 190],
    &[191, 192, 193, 194, 195, 196, 197, 198, 199, 200],
];

pub(crate) const NUMERIC_MEDIUM: [&[i64]; 30] = [
    &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29],
    &[1, 1, 2, 3, 5, 8, 13, 21, 34, 55],
    &[1, 2, 4, 8, 16, 32, 64, 128, 256, 512],
    &[1, 3, 9, 27, 81, 243, 729, 2187, 6561, 19683],
    &[1, 4, 9, 16, 25, 36, 49, 64, 81, 100],
    &[1, 8, 27, 64, 125, 216, 343, 512, 729, 1000],
    &[1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880],
    &[1, 3, 6, 10, 15, 21, 28, 36, 45, 55],
    &[2, 1, 3, 4, 7, 11, 18, 29, 47, 76],
    &[0, 1, 2, 5, 12, 29, 70, 169, 408, 985],
    &[1, 4, 27, 256, 3125, 46656, 823543, 16777216, 387420489, 10000000000],
    &[1, 2, 6, 20, 70, 252, 924, 3432, 12870, 48620],
    &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29],
    &[4, 6, 9, 10, 14, 15, 21, 22, 25, 26],
    &[1, 10, 11, 100, 101, 110, 111, 1000, 1001, 1010],
    &[0, 1, 81, 512, 2401, 4913, 5832, 17576, 19683, 234256],
    &[1, 2, 145, 40585],
    &[2, 5, 12, 20, 29, 39, 50, 62, 75, 89],
    &[1, 8, 10, 18, 19, 100, 101, 108, 109, 110],
    &[3, 7, 31, 127, 2047, 8191, 131071, 524287, 8388607, 536870911],
    &[1, 2, 4, 8, 16, 23, 28, 38, 58, 89],
    &[1, 2, 4, 8, 15, 26, 42, 64, 93, 129],
    &[1, 5, 12, 22, 35, 51, 70, 92, 117, 145],
    &[0, 1, 1, 2, 1, 2, 2, 3, 1, 3],
    &[1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975],
    &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29],
    &[1, 11, 21, 1211, 111221],
    &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29],
    &[1, 2, 4, 8, 16, 32, 64, 128, 256, 512],
    &[1, 3, 7, 15, 31, 63, 127, 255, 511, 1023],
];

pub(crate) const NUMERIC_HIGH: [&[i64]; 30] = [
    &[29, 57, 68, 120, 134, 140, 173, 197, 283, 313],
    &[24, 26, 36, 40, 184, 226, 244, 384, 391, 423],
    &[90, 203, 212, 235, 270, 324, 342, 352, 371, 417],
    &[20, 48, 95, 234, 282, 296, 352, 402, 428, 481],
    &[62, 98, 130, 154, 290, 315, 324, 385, 408, 447],
    &[2, 42, 66, 102, 153, 195, 201, 252, 306, 396],
    &[128, 151, 153, 217, 224, 332, 382, 400, 450, 478],
    &[26, 50, 114, 148, 160, 170, 274, 347, 432, 497],
    &[48, 94, 176, 177, 219, 276, 282, 283, 459, 488],
    &[139, 252, 272, 281, 304, 361, 370, 415, 438, 500],
    &[15, 95, 115, 195, 240, 318, 326, 350, 432, 450],
    &[134, 224, 293, 378, 379, 395, 434, 451, 482, 496],
    &[23, 93, 142, 145, 245, 266, 296, 317, 428, 495],
    &[18, 39, 71, 194, 197, 219, 263, 270, 416, 473],
    &[9, 84, 144, 170, 325, 393, 401, 405, 435, 497],
    &[26, 40, 202, 267, 282, 340, 359, 408, 410, 495],
    &[34, 92, 164, 165, 209, 296, 414, 456, 467, 494],
    &[16, 119, 121, 123, 135, 139, 285, 311, 409, 412],
    &[8, 11, 12, 103, 116, 196, 247, 254, 389, 427],
    &[12, 36, 96, 119, 171, 213, 221, 232, 363, 451],
    &[38, 91, 142, 197, 215, 313, 316, 319, 423, 466],
    &[7, 42, 147, 201, 213, 248, 310, 332, 436, 479],
    &[27, 101, 105, 164, 245, 290, 304, 441, 449, 490],
    &[4, 11, 29, 106, 214, 283, 296, 298, 360, 497],
    &[72, 106, 139, 165, 171, 192, 199, 429, 453, 477],
    &[187, 218, 260, 295, 301, 314, 379, 410, 452, 469],
    &[29, 63, 95, 140, 150, 190, 221, 437, 482, 491],
    &[3, 11, 84, 144, 156, 177, 188, 199, 229, 284],
    &[26, 94, 98, 137, 176, 301, 323, 330, 372, 444],
    &[39, 81, 88, 210, 215, 378, 416, 430, 439, 490],
];
