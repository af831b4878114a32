//! Greedy covering of a random point cloud by balls centered at its points.

use ecbound::count::greedy_cover;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (n, radius) = (3, 2.0);
    let cloud: Vec<Vec<f64>> = std::iter::repeat_with(|| {
        (0..n)
            .map(|_| rng.gen_range(-radius..radius))
            .collect::<Vec<f64>>()
    })
    .filter(|p: &Vec<f64>| p.iter().map(|x| x * x).sum::<f64>() <= radius * radius)
    .take(1000)
    .collect();
    for rho in [0.25, 0.5, 1.0, 2.0] {
        let c = greedy_cover(&cloud, radius, rho);
        println!(
            "ρ = {rho}: {} centers cover {}/{} points, bound (1 + 2R/ρ)^n = {}",
            c.centers.len(),
            c.covered,
            cloud.len(),
            c.bound
        );
    }
}
