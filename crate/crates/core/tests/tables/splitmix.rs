/// splitmix64 stream shared with the generator script.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }

    fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

fn sample(kind: &str, n: usize, seed: u64) -> Vec<f64> {
    let mut g = SplitMix64(seed);
    (0..n)
        .map(|_| match kind {
            "normal" => g.normal(),
            "uniform" => g.uniform(),
            "lognormal" => (0.25 * g.normal()).exp(),
            _ => unreachable!("{kind}"),
        })
        .collect()
}
