//! Values printed in the original Series 6 sample log.
#![allow(dead_code)]

pub const LOG_TEXT: &str = include_str!("../data/sample.log");

pub const LOST: [u64; 67] = [
    30530, 31840, 39910, 10960, 60270, 71280, 50340, 51580, 31670,
    49260, 53710, 41620, 86830, 72580, 56310, 70560, 68870, 45500,
    52480, 52660, 45640, 46870, 44660, 75860, 68150, 70110, 69610,
    47130, 61980, 75310, 90440, 75700, 62670, 54870, 69820, 75170,
    84350, 76990, 80480, 70840, 54920, 40720, 33800, 31590, 28860,
    24650, 27250, 53490, 58180, 56200, 57490, 53930, 39030, 83870,
    87180, 78270, 70990, 43600, 52360, 43910, 33820, 31120, 34830,
    32370, 32840, 37080, 32390,
];

pub const FOUND: [u64; 133] = [
    12880, 22240, 26690, 11190, 19880, 36170, 14930, 28100, 25860,
    27580, 36040, 34590, 22250, 12060, 11760, 8880, 10660, 30840,
    48000, 33030, 43040, 26330, 45880, 50380, 34970, 45950, 36610,
    46660, 47980, 45330, 65290, 57080, 55340, 54700, 43930, 34850,
    55030, 43240, 69500, 50770, 58680, 54750, 65470, 59610, 79030,
    67190, 63890, 61550, 65590, 54100, 69460, 69210, 37390, 41850,
    53130, 31650, 45400, 46430, 50490, 44310, 35960, 53510, 25760,
    38950, 33250, 39360, 46650, 63050, 64890, 68590, 76430, 50570,
    57630, 57250, 28830, 42020, 45500, 67160, 63310, 69930, 80200,
    76980, 56300, 44320, 58340, 79850, 81590, 69740, 88200, 89160,
    62640, 55030, 60510, 39810, 51660, 51730, 47720, 62330, 66150,
    47100, 60470, 70810, 88930, 75110, 65290, 68830, 59430, 63710,
    22570, 36940, 29450, 43630, 53100, 55560, 64750, 39530, 59610,
    58250, 71950, 62800, 75250, 76720, 81910, 31730, 47010, 44890,
    58490, 61750, 66900, 69380, 81650, 79450, 72420,
];

pub const LOST2FOUND: [u64; 28] = [
    14930, 22250, 11760, 43040, 26330, 34970, 46660, 43930, 50770,
    61550, 54100, 37390, 31650, 44310, 25760, 50570, 28830, 56300,
    69740, 62640, 39810, 62330, 65290, 59430, 22570, 39530, 31730,
    72420,
];

pub const FOUND2LOST: [u64; 28] = [
    31840, 10960, 60270, 51580, 31670, 49260, 53710, 86830, 70560,
    68870, 45500, 52660, 45640, 46870, 75860, 69610, 61980, 75310,
    90440, 54870, 69820, 75170, 84350, 80480, 53490, 56200, 83870,
    78270,
];

/// Printed `mean` lines, in block order.
pub const MEANS: [u64; 4] = [54181, 51442, 43235, 61283];
/// Printed `var` lines, in block order.
pub const VARS: [f64; 4] = [18541.5, 18616.1, 16826.7, 18824.2];
pub const KILOBYTES: f64 = 6.37927;
pub const NOC: u64 = 71;
pub const NOP: u64 = 0;
pub const BPS: u64 = 28170;

pub fn sequences() -> [&'static [u64]; 4] {
    [&LOST, &FOUND, &LOST2FOUND, &FOUND2LOST]
}
