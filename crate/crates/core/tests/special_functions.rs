//! Bessel kernels against high-precision reference values, plus the
//! combinatorial identities the moment formulas rely on.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use occtime_core::special_fn::{
    bessel_i, bessel_k, binomial_big, factorial_big, gen_binomial, gen_binomial_f64, stirling1_unsigned, stirling2,
    StirlingCache,
};
use proptest::prelude::*;

// (order, x, K_order(x), I_order(x)) computed with 40-digit arithmetic.
const REFERENCE: &[(f64, f64, f64, f64)] = &[
    (-0.9, 1e-06, 2.504_516_141_600_377_2e5, 49_270.426_552_047_036),
    (-0.9, 0.001, 4.997_122_655_625_213_4e2, 98.307_671_110_087_01),
    (-0.9, 0.1, 7.761_163_528_680_414, 1.597_063_665_074_226_5),
    (-0.9, 1.0, 5.630_611_832_461_583e-1, 0.744_502_437_358_848),
    (-0.9, 1.999, 1.347_252_647_128_018_3e-1, 1.714_817_037_448_743_5),
    (-0.9, 2.001, 1.343_759_087_546_010_4e-1, 1.717_792_866_344_666_7),
    (-0.9, 5.0, 3.975_058_220_110_541e-3, 24.859_839_455_076_15),
    (-0.9, 17.0, 1.278_740_448_661_294_3e-8, 2_297_820.537_974_111_3),
    (-0.9, 50.0, 3.437_628_959_871_107e-23, 2.908_655_829_934_014_8e20),
    (-0.5, 1e-06, 1.253_312_884_001_989_7e3, 797.884_560_803_264_3),
    (-0.5, 0.001, 3.959_365_951_311_664e1, 25.231_337_835_865_26),
    (-0.5, 0.1, 3.586_166_838_797_26, 2.535_758_701_187_412_5),
    (-0.5, 1.0, 4.610_685_044_478_945_4e-1, 1.231_200_214_592_967_5),
    (-0.5, 1.999, 1.200_877_954_314_500_5e-1, 2.121_076_779_764_573_8),
    (-0.5, 2.001, 1.197_879_508_997_077_4e-1, 2.124_107_958_049_936),
    (-0.5, 5.0, 3.776_613_374_642_882_5e-3, 26.479_951_764_305_95),
    (-0.5, 17.0, 1.258_430_644_687_121_9e-8, 2_337_178.042_354_088_3),
    (-0.5, 50.0, 3.418_620_095_457_075e-23, 2.925_156_852_991_29e20),
    (-0.3, 1e-06, 1.161_646_306_062_691_1e2, 59.843_335_655_932_65),
    (-0.3, 0.001, 1.440_654_752_904_102_8e1, 7.533_832_289_029_093),
    (-0.3, 0.1, 2.805_056_475_021_572_3, 1.899_176_021_488_672_6),
    (-0.3, 1.0, 4.350_760_242_088_020_4e-1, 1.312_874_857_675_747_9),
    (-0.3, 1.999, 1.161_804_883_909_204e-1, 2.235_858_392_349_227_7),
    (-0.3, 2.001, 1.158_936_506_625_728e-1, 2.238_945_590_791_920_5),
    (-0.3, 5.0, 3.721_669_328_873_425_4e-3, 26.964_010_573_921_826),
    (-0.3, 17.0, 1.252_686_279_585_558_5e-8, 2_348_549.140_456_864),
    (-0.3, 50.0, 3.413_208_199_536_853e-23, 2.929_888_721_451_148e20),
    (0.0, 1e-06, 1.393_144_207_362_642e1, 1.00000000000025),
    (0.0, 0.001, 7.023_688_800_562_382, 1.000_000_250_000_015_6),
    (0.0, 0.1, 2.427_069_024_702_016_4, 1.002_501_562_934_095_6),
    (0.0, 1.0, 4.210_244_382_407_083_4e-1, 1.266_065_877_752_008_4),
    (0.0, 1.999, 1.140_338_305_892_329_2e-1, 2.277_995_407_407_224),
    (0.0, 2.001, 1.137_540_987_366_846_3e-1, 2.281_176_681_531_886),
    (0.0, 5.0, 3.691_098_334_042_594_2e-3, 27.239_871_823_604_446),
    (0.0, 17.0, 1.249_466_402_631_773_1e-8, 2_354_970.223_168_293_5),
    (0.0, 50.0, 3.410_167_749_789_495_6e-23, 2.932_553_783_849_336_2e20),
    (0.3, 1e-06, 1.161_646_306_062_691_1e2, 0.014_344_014_783_365_663),
    (0.3, 0.001, 1.440_654_752_904_102_8e1, 0.113_938_581_328_539_15),
    (0.3, 0.1, 2.805_056_475_021_572_3, 0.454_470_352_291_974_2),
    (0.3, 1.0, 4.350_760_242_088_020_4e-1, 1.088_794_949_016_803),
    (0.3, 1.999, 1.161_804_883_909_204e-1, 2.176_021_233_374_696_4),
    (0.3, 2.001, 1.158_936_506_625_728e-1, 2.179_256_163_635_259),
    (0.3, 5.0, 3.721_669_328_873_425_4e-3, 26.962_093_779_437_943),
    (0.3, 17.0, 1.252_686_279_585_558_5e-8, 2_348_549.140_456_857_6),
    (0.3, 50.0, 3.413_208_199_536_853e-23, 2.929_888_721_451_148e20),
    (0.7, 1e-06, 1.671_029_838_283_050_4e4, 0.000_042_745_239_754_228_655),
    (0.7, 0.001, 1.327_242_810_264_99e2, 0.005_381_307_647_351_171),
    (0.7, 0.1, 5.065_500_013_457_82, 0.135_371_191_621_886_32),
    (0.7, 1.0, 5.026_012_749_793_812e-1, 0.781_811_462_174_600_5),
    (0.7, 1.999, 1.261_735_237_439_611e-1, 1.877_630_195_298_520_2),
    (0.7, 2.001, 1.258_532_403_900_197_7e-1, 1.880_789_551_742_143_4),
    (0.7, 5.0, 3.860_478_504_703_798_4e-3, 25.769_623_334_000_034),
    (0.7, 17.0, 1.267_095_745_497_808_4e-8, 2_320_226.831_392_008_3),
    (0.7, 50.0, 3.426_753_929_472_965e-23, 2.918_073_474_744_451e20),
    (1.6, 1e-06, 5.391_629_177_009_427e9, 5.796_021_754_100_567_5e-11),
    (1.6, 0.001, 8.545_152_819_041_583e4, 3.657_042_846_155_090_6e-6),
    (1.6, 0.1, 5.370_052_021_007_634e1, 0.005_801_596_787_394_516),
    (1.6, 1.0, 1.021_944_773_706_107_6, 0.253_715_175_850_040_8),
    (1.6, 1.999, 1.916_181_855_331_461_3e-1, 1.007_555_855_814_079),
    (1.6, 2.001, 1.910_666_608_469_631e-1, 1.009_874_577_537_913),
    (1.6, 5.0, 4.661_173_304_558_204e-3, 20.474_999_699_777_566),
    (1.6, 17.0, 1.344_306_490_841_210_8e-8, 2_179_139.595_020_209),
    (1.6, 50.0, 3.497_711_153_027_549_7e-23, 2.857_691_785_537_66e20),
    (4.3, 1e-06, 5.503_061_813_039_177e27, 2.112_988_618_298_312e-29),
    (4.3, 0.001, 6.927_943_834_265_393e14, 1.678_406_598_335_436_5e-16),
    (4.3, 0.1, 1.738_903_310_226_212_3e6, 6.685_009_148_466_745e-8),
    (4.3, 1.0, 8.094_876_637_257_093e1, 0.001_397_354_859_054_348_7),
    (4.3, 1.999, 3.331_468_938_909_891, 0.031_555_015_835_267_85),
    (4.3, 2.001, 3.315_361_129_919_038, 0.031_702_614_889_291_95),
    (4.3, 5.0, 1.888_615_819_084_414e-2, 4.007_010_552_803_191),
    (4.3, 17.0, 2.115_000_978_444_127_3e-8, 1_348_527.872_777_343_7),
    (4.3, 50.0, 4.094_907_105_425_280_7e-23, 2.433_192_438_920_843_4e20),
    (12.7, 1e-06, 1.188_106_774_933_319e88, 3.313_681_865_198_265e-90),
    (12.7, 0.001, 9.437_467_370_312_378e49, 4.171_678_382_825_014e-52),
    (12.7, 0.1, 3.756_320_801_874_631_4e24, 1.048_069_448_435_184_9e-26),
    (12.7, 1.0, 7.338_121_772_157_493e11, 5.348_487_454_116_607e-14),
    (12.7, 1.999, 1.041_351_051_120_973_2e8, 3.734_426_076_567_674_6e-10),
    (12.7, 2.001, 1.028_035_149_329_125_3e8, 3.782_705_196_516_219e-10),
    (12.7, 5.0, 5.906_760_362_148_627e2, 0.000_062_000_589_281_137_22),
    (12.7, 17.0, 1.066_538_137_392_158_3e-6, 22_089.509_966_099_584),
    (12.7, 50.0, 1.670_712_915_244_416_7e-22, 58014349696045807158.0),
    (30.3, 1e-06, 1.019_367_353_714_678_5e222, 1.618_812_894_574_541_4e-224),
    (30.3, 0.001, 1.283_307_454_595_062e131, 1.285_868_799_166_816e-133),
    (30.3, 0.1, 3.223_247_577_713_809e70, 5.119_544_744_994_930_5e-73),
    (30.3, 1.0, 1.601_864_197_613_212_2e40, 1.029_591_698_180_4e-42),
    (30.3, 1.999, 1.199_235_415_494_969_2e31, 1.373_026_212_431_781_8e-33),
    (30.3, 2.001, 1.163_364_246_569_788e31, 1.415_355_951_323_445_3e-33),
    (30.3, 5.0, 8.654_570_748_222_809e18, 1.881_230_433_904_876e-21),
    (30.3, 17.0, 7.882_482_821_120_94e1, 0.000_182_560_569_928_111_83),
    (30.3, 50.0, 2.377_762_941_415_144_3e-19, 35967124096474367.249),
];

#[test]
fn bessel_against_reference_table() {
    for &(nu, x, k, i) in REFERENCE {
        let got_k = bessel_k(nu, x);
        let got_i = bessel_i(nu, x);
        assert!((got_k - k).abs() <= 1e-12 * k.abs(), "K_{nu}({x}) = {got_k}, want {k}");
        assert!((got_i - i).abs() <= 1e-12 * i.abs(), "I_{nu}({x}) = {got_i}, want {i}");
    }
}

fn brute_force_cycles(n: usize) -> Vec<u64> {
    // Count permutations of {0..n} by number of cycles.
    let mut counts = vec![0u64; n + 1];
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for s in 0..n {
            if !seen[s] {
                cycles += 1;
                let mut j = s;
                while !seen[j] {
                    seen[j] = true;
                    j = perm[j];
                }
            }
        }
        counts[cycles] += 1;
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    counts
}

fn brute_force_partitions(n: usize) -> Vec<u64> {
    // Restricted growth strings enumerate set partitions.
    fn go(pos: usize, n: usize, max: usize, counts: &mut [u64]) {
        if pos == n {
            counts[max] += 1;
            return;
        }
        for b in 0..=max {
            go(pos + 1, n, max.max(b + 1), counts);
        }
    }
    let mut counts = vec![0u64; n + 1];
    if n == 0 {
        counts[0] = 1;
    } else {
        go(0, n, 0, &mut counts);
    }
    counts
}

#[test]
fn stirling_numbers_count_cycles_and_partitions() {
    for n in 0..=7 {
        let cycles = brute_force_cycles(n);
        let blocks = brute_force_partitions(n);
        for k in 0..=n {
            if n > 0 || k == 0 {
                assert_eq!(stirling1_unsigned(n, k), BigUint::from(if n == 0 { 1 } else { cycles[k] }), "s1({n},{k})");
            }
            assert_eq!(stirling2(n, k), BigUint::from(blocks[k]), "S2({n},{k})");
        }
    }
}

#[test]
fn stirling_recurrences_hold_across_cache() {
    let t = StirlingCache::global();
    for n in 0..t.max_n() {
        for k in 1..=n + 1 {
            assert_eq!(t.first(n + 1, k), t.first(n, k) * BigUint::from(n) + t.first(n, k - 1));
            assert_eq!(t.second(n + 1, k), t.second(n, k) * BigUint::from(k) + t.second(n, k - 1));
        }
    }
}

#[test]
fn stirling_convolution_identity() {
    // s1(n+1, l+m+1) C(l+m, l) = Σ_k s1(k+1, l+1) s1(n-k, m) C(n, k)
    for n in 0..=12usize {
        for m in 0..=12usize {
            for l in 0..=12usize {
                let lhs = stirling1_unsigned(n + 1, l + m + 1) * binomial_big((l + m) as u64, l as u64);
                let rhs: BigUint = (0..=n)
                    .map(|k| stirling1_unsigned(k + 1, l + 1) * stirling1_unsigned(n - k, m) * binomial_big(n as u64, k as u64))
                    .sum();
                assert_eq!(lhs, rhs, "n={n} m={m} l={l}");
            }
        }
    }
}

#[test]
fn signed_stirling_inner_product_identity() {
    // Σ_{i=k}^n s1(n,i) S2(i,k) (-2)^{n-i} = (-1)^{n-k} (2n-k-1)! / (2^{n-k} (k-1)! (n-k)!)
    for n in 1..=12usize {
        for k in 1..=n {
            let lhs: BigInt = (k..=n)
                .map(|i| {
                    BigInt::from(stirling1_unsigned(n, i)) * BigInt::from(stirling2(i, k)) * BigInt::from(-2).pow((n - i) as u32)
                })
                .sum();
            let num = BigInt::from(factorial_big((2 * n - k - 1) as u64));
            let den = BigInt::from(2).pow((n - k) as u32)
                * BigInt::from(factorial_big((k - 1) as u64))
                * BigInt::from(factorial_big((n - k) as u64));
            assert!((&num % &den).is_zero());
            let sign = if (n - k) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            assert_eq!(lhs, sign * num / den, "n={n} k={k}");
        }
    }
}

#[test]
fn hockey_stick_exact_for_rationals() {
    for (p, q) in [(-1, 2), (-3, 10), (7, 3), (-5, 1)] {
        let x = BigRational::new(p.into(), q.into());
        for n in 0..=20usize {
            let lhs: BigRational = (0..=n)
                .map(|k| gen_binomial(&(x.clone() + BigRational::from_integer(k.into())), k))
                .fold(BigRational::zero(), |a, b| a + b);
            let rhs = gen_binomial(&(x.clone() + BigRational::from_integer((n + 1).into())), n);
            assert_eq!(lhs, rhs, "x={x} n={n}");
        }
    }
}

proptest! {
    #[test]
    fn hockey_stick_in_floating_point(x in -3.0f64..3.0, n in 0usize..=20) {
        let lhs: f64 = (0..=n).map(|k| gen_binomial_f64(x + k as f64, k)).sum();
        let rhs = gen_binomial_f64(x + n as f64 + 1.0, n);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0), "lhs={} rhs={}", lhs, rhs);
    }

    #[test]
    fn k_is_even_in_order_and_positive(nu in 0.0f64..6.0, x in 1e-4f64..60.0) {
        let a = bessel_k(nu, x);
        prop_assert!(a > 0.0);
        prop_assert_eq!(a, bessel_k(-nu, x));
    }

    #[test]
    fn recurrence_links_neighbouring_orders(nu in -0.99f64..5.0, x in 1e-3f64..40.0) {
        // K_{ν+1} - K_{ν-1} = (2ν/x) K_ν ; I_{ν-1} - I_{ν+1} = (2ν/x) I_ν
        let (km, k0, kp) = (bessel_k(nu - 1.0, x), bessel_k(nu, x), bessel_k(nu + 1.0, x));
        prop_assert!((kp - km - 2.0 * nu / x * k0).abs() <= 1e-11 * kp.abs());
        if nu > 0.0 {
            let (im, i0, ip) = (bessel_i(nu - 1.0, x), bessel_i(nu, x), bessel_i(nu + 1.0, x));
            prop_assert!((im - ip - 2.0 * nu / x * i0).abs() <= 1e-11 * im.abs());
        }
    }
}
