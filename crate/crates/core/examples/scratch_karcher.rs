use veesa_core::align::{align_to_mean, karcher_mean};
use veesa_core::fdata::{FunctionalDataset, FunctionalSample, Grid};

fn main() {
    let m = 150;
    let grid = Grid::unit(m).unwrap();
    let mut samples = Vec::new();
    // bumps: center 0.35..0.65, height 0.8..1.3, width sd 0.08
    for k in 0..10 {
        let c = 0.35 + 0.03 * k as f64;
        let z = 0.8 + 0.05 * k as f64;
        let vals: Vec<f64> = grid
            .normalized()
            .iter()
            .map(|&t| z * (-((t - c) / 0.08_f64).powi(2) / 2.0).exp())
            .collect();
        samples.push(FunctionalSample::new(vals).unwrap());
    }
    let data = FunctionalDataset::new(grid.clone(), samples, None).unwrap();
    let res = karcher_mean(&data, 20, 1e-4).unwrap();
    println!("iterations={} converged={}", res.iterations, res.converged);
    println!("objective trace: {:?}", res.objective);

    // mean function aligned back to the mean srvf
    let test = FunctionalDataset::new(grid.clone(), vec![res.karcher_mean_f.clone()], None).unwrap();
    let (aligned, warps) = align_to_mean(&grid, &test, &res.karcher_mean_srvf).unwrap();
    let dev_warp = warps[0]
        .values()
        .iter()
        .zip(grid.normalized())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    let dev_q = aligned[0]
        .values()
        .iter()
        .zip(res.karcher_mean_srvf.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    println!("align-mean-back: warp dev {dev_warp:.4}, srvf dev {dev_q:.4}");

    // training functions realigned to mean reproduce training warps?
    let (_, tw) = align_to_mean(&grid, &data, &res.karcher_mean_srvf).unwrap();
    let mut worst = 0.0_f64;
    for (a, b) in tw.iter().zip(&res.warps) {
        let d = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0_f64, f64::max);
        worst = worst.max(d);
    }
    println!("train realign max warp dev {worst:.4}");
}
