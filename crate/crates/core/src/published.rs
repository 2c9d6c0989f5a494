//! Published optimal angles and values for MaxCut in the `D → ∞` limit.
//!
//! Angles are given to four decimals (exact `1/2, π/8` at `p = 1`), values
//! `ν̄_p` are rounded to four decimals.

// some four-decimal angles happen to sit near named constants
#![allow(clippy::approx_constant)]

use crate::algebra::QaoaParams;

#[derive(Debug, Clone, Copy)]
pub struct PublishedAngles {
    pub p: usize,
    pub gamma: &'static [f64],
    pub beta: &'static [f64],
}

impl PublishedAngles {
    pub fn params(&self) -> QaoaParams {
        QaoaParams::maxcut(self.gamma.to_vec(), self.beta.to_vec())
            .expect("published angles are well formed")
    }
}

/// Optimal `ν̄_p` for `p = 1..=17`.
pub const OPTIMAL_NU: [f64; 17] = [
    0.3033, 0.4075, 0.4726, 0.5157, 0.5476, 0.5721, 0.5915, 0.6073, 0.6203, 0.6314, 0.6408, 0.6490,
    0.6561, 0.6623, 0.6679, 0.6729, 0.6773,
];

/// Lower bounds on `ν̄_p` for `p = 18, 19, 20`, obtained at [`EXTRAPOLATED_ANGLES`].
pub const LOWER_BOUND_NU: [f64; 3] = [0.6813, 0.6848, 0.6879];

/// Optimal angles for `p = 1..=17`.
pub const OPTIMAL_ANGLES: [PublishedAngles; 17] = [
    PublishedAngles {
        p: 1,
        gamma: &[0.5],
        beta: &[std::f64::consts::FRAC_PI_8],
    },
    PublishedAngles {
        p: 2,
        gamma: &[0.3817, 0.6655],
        beta: &[0.4960, 0.2690],
    },
    PublishedAngles {
        p: 3,
        gamma: &[0.3297, 0.5688, 0.6406],
        beta: &[0.5500, 0.3675, 0.2109],
    },
    PublishedAngles {
        p: 4,
        gamma: &[0.2949, 0.5144, 0.5586, 0.6429],
        beta: &[0.5710, 0.4176, 0.3028, 0.1729],
    },
    PublishedAngles {
        p: 5,
        gamma: &[0.2705, 0.4804, 0.5074, 0.5646, 0.6397],
        beta: &[0.5899, 0.4492, 0.3559, 0.2643, 0.1486],
    },
    PublishedAngles {
        p: 6,
        gamma: &[0.2528, 0.4531, 0.4750, 0.5146, 0.5650, 0.6392],
        beta: &[0.6004, 0.4670, 0.3880, 0.3176, 0.2325, 0.1291],
    },
    PublishedAngles {
        p: 7,
        gamma: &[0.2383, 0.4327, 0.4516, 0.4830, 0.5147, 0.5686, 0.6393],
        beta: &[0.6085, 0.4810, 0.4090, 0.3534, 0.2857, 0.2080, 0.1146],
    },
    PublishedAngles {
        p: 8,
        gamma: &[
            0.2268, 0.4162, 0.4332, 0.4608, 0.4818, 0.5179, 0.5717, 0.6393,
        ],
        beta: &[
            0.6151, 0.4906, 0.4244, 0.3780, 0.3224, 0.2606, 0.1884, 0.1030,
        ],
    },
    PublishedAngles {
        p: 9,
        gamma: &[
            0.2172, 0.4020, 0.4187, 0.4438, 0.4592, 0.4838, 0.5212, 0.5754, 0.6398,
        ],
        beta: &[
            0.6196, 0.4973, 0.4354, 0.3956, 0.3481, 0.2973, 0.2390, 0.1717, 0.0934,
        ],
    },
    PublishedAngles {
        p: 10,
        gamma: &[
            0.2089, 0.3902, 0.4066, 0.4305, 0.4423, 0.4604, 0.4858, 0.5256, 0.5789, 0.6402,
        ],
        beta: &[
            0.6235, 0.5029, 0.4437, 0.4092, 0.3673, 0.3246, 0.2758, 0.2208, 0.1578, 0.0855,
        ],
    },
    PublishedAngles {
        p: 11,
        gamma: &[
            0.2019, 0.3799, 0.3963, 0.4196, 0.4291, 0.4431, 0.4611, 0.4895, 0.5299, 0.5821, 0.6406,
        ],
        beta: &[
            0.6268, 0.5070, 0.4502, 0.4195, 0.3822, 0.3451, 0.3036, 0.2571, 0.2051, 0.1459, 0.0788,
        ],
    },
    PublishedAngles {
        p: 12,
        gamma: &[
            0.1958, 0.3708, 0.3875, 0.4103, 0.4185, 0.4297, 0.4430, 0.4639, 0.4933, 0.5343, 0.5851,
            0.6410,
        ],
        beta: &[
            0.6293, 0.5103, 0.4553, 0.4275, 0.3937, 0.3612, 0.3248, 0.2849, 0.2406, 0.1913, 0.1356,
            0.0731,
        ],
    },
    PublishedAngles {
        p: 13,
        gamma: &[
            0.1903, 0.3627, 0.3797, 0.4024, 0.4096, 0.4191, 0.4290, 0.4450, 0.4668, 0.4975, 0.5385,
            0.5878, 0.6414,
        ],
        beta: &[
            0.6315, 0.5130, 0.4593, 0.4340, 0.4028, 0.3740, 0.3417, 0.3068, 0.2684, 0.2260, 0.1792,
            0.1266, 0.0681,
        ],
    },
    PublishedAngles {
        p: 14,
        gamma: &[
            0.1855, 0.3555, 0.3728, 0.3954, 0.4020, 0.4103, 0.4179, 0.4304, 0.4471, 0.4703, 0.5017,
            0.5425, 0.5902, 0.6418,
        ],
        beta: &[
            0.6334, 0.5152, 0.4627, 0.4392, 0.4103, 0.3843, 0.3554, 0.3243, 0.2906, 0.2535, 0.2131,
            0.1685, 0.1188, 0.0638,
        ],
    },
    PublishedAngles {
        p: 15,
        gamma: &[
            0.1811, 0.3489, 0.3667, 0.3893, 0.3954, 0.4028, 0.4088, 0.4189, 0.4318, 0.4501, 0.4740,
            0.5058, 0.5462, 0.5924, 0.6422,
        ],
        beta: &[
            0.6349, 0.5169, 0.4655, 0.4434, 0.4163, 0.3927, 0.3664, 0.3387, 0.3086, 0.2758, 0.2402,
            0.2015, 0.1589, 0.1118, 0.0600,
        ],
    },
    PublishedAngles {
        p: 16,
        gamma: &[
            0.1771, 0.3430, 0.3612, 0.3838, 0.3896, 0.3964, 0.4011, 0.4095, 0.4197, 0.4343, 0.4532,
            0.4778, 0.5099, 0.5497, 0.5944, 0.6425,
        ],
        beta: &[
            0.6363, 0.5184, 0.4678, 0.4469, 0.4213, 0.3996, 0.3756, 0.3505, 0.3234, 0.2940, 0.2624,
            0.2281, 0.1910, 0.1504, 0.1056, 0.0566,
        ],
    },
    PublishedAngles {
        p: 17,
        gamma: &[
            0.1735, 0.3376, 0.3562, 0.3789, 0.3844, 0.3907, 0.3946, 0.4016, 0.4099, 0.4217, 0.4370,
            0.4565, 0.4816, 0.5138, 0.5530, 0.5962, 0.6429,
        ],
        beta: &[
            0.6375, 0.5197, 0.4697, 0.4499, 0.4255, 0.4054, 0.3832, 0.3603, 0.3358, 0.3092, 0.2807,
            0.2501, 0.2171, 0.1816, 0.1426, 0.1001, 0.0536,
        ],
    },
];

/// Extrapolated (not optimized) angles for `p = 18, 19, 20`.
pub const EXTRAPOLATED_ANGLES: [PublishedAngles; 3] = [
    PublishedAngles {
        p: 18,
        gamma: &[
            0.1694, 0.3318, 0.3513, 0.3745, 0.3795, 0.3858, 0.3886, 0.3943, 0.4007, 0.4080, 0.4201,
            0.4410, 0.4591, 0.4849, 0.5178, 0.5579, 0.5999, 0.6434,
        ],
        beta: &[
            0.6412, 0.5232, 0.4726, 0.4533, 0.4295, 0.4104, 0.3895, 0.3683, 0.3457, 0.3213, 0.2956,
            0.2680, 0.2387, 0.2073, 0.1730, 0.1369, 0.0949, 0.0510,
        ],
    },
    PublishedAngles {
        p: 19,
        gamma: &[
            0.1662, 0.3270, 0.3470, 0.3704, 0.3752, 0.3814, 0.3835, 0.3882, 0.3931, 0.3972, 0.4064,
            0.4260, 0.4517, 0.4620, 0.4885, 0.5219, 0.5619, 0.6025, 0.6438,
        ],
        beta: &[
            0.6425, 0.5245, 0.4743, 0.4556, 0.4327, 0.4147, 0.3949, 0.3752, 0.3543, 0.3318, 0.3082,
            0.2831, 0.2566, 0.2287, 0.1983, 0.1653, 0.1307, 0.0903, 0.0486,
        ],
    },
    PublishedAngles {
        p: 20,
        gamma: &[
            0.1632, 0.3224, 0.3430, 0.3666, 0.3714, 0.3775, 0.3789, 0.3828, 0.3865, 0.3875, 0.3942,
            0.4129, 0.4376, 0.4541, 0.4649, 0.4921, 0.5259, 0.5659, 0.6051, 0.6442,
        ],
        beta: &[
            0.6438, 0.5258, 0.4758, 0.4577, 0.4355, 0.4184, 0.3996, 0.3812, 0.3616, 0.3407, 0.3189,
            0.2958, 0.2716, 0.2466, 0.2194, 0.1899, 0.1581, 0.1251, 0.0862, 0.0464,
        ],
    },
];

/// Published angles at depth `p`, if any.
pub fn angles(p: usize) -> Option<&'static PublishedAngles> {
    OPTIMAL_ANGLES
        .iter()
        .chain(EXTRAPOLATED_ANGLES.iter())
        .find(|a| a.p == p)
}

/// Published `ν̄_p` (or its lower bound for `p ≥ 18`).
pub fn nu_bar(p: usize) -> Option<f64> {
    match p {
        1..=17 => Some(OPTIMAL_NU[p - 1]),
        18..=20 => Some(LOWER_BOUND_NU[p - 18]),
        _ => None,
    }
}
