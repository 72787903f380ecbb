#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vmcascade_core::model::{BroadcastModel, CascadeModel, DistortionTable};
use vmcascade_core::prob::{Alphabet, JointDistribution};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random pmf; roughly one entry in six is an exact zero.
pub fn pmf(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..n)
            .map(|_| if rng.gen_range(0..6) == 0 { 0.0 } else { -rng.gen::<f64>().max(1e-12).ln() })
            .collect();
        let s: f64 = w.iter().sum();
        if s > 0.0 {
            return w.into_iter().map(|v| v / s).collect();
        }
    }
}

pub fn table(rng: &mut ChaCha8Rng, slices: usize, width: usize) -> Vec<f64> {
    (0..slices).flat_map(|_| pmf(rng, width)).collect()
}

pub fn joint(rng: &mut ChaCha8Rng, sizes: &[usize]) -> JointDistribution {
    let vars = sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| Alphabet::new(format!("V{i}"), s).unwrap())
        .collect();
    JointDistribution::new(vars, pmf(rng, sizes.iter().product())).unwrap()
}

/// Costs with a free action 0; Hamming distortions.
pub fn costs(rng: &mut ChaCha8Rng, na: usize) -> Vec<f64> {
    (0..na).map(|a| if a == 0 { 0.0 } else { rng.gen_range(0.0..1.0) }).collect()
}

pub fn cascade(rng: &mut ChaCha8Rng, (nx, ny, nz, na): (usize, usize, usize, usize)) -> CascadeModel {
    let pxy = pmf(rng, nx * ny);
    let vm = table(rng, na * ny, nz);
    let cost = costs(rng, na);
    CascadeModel::from_tables(
        pxy,
        (nx, ny, nz),
        vm,
        &cost,
        DistortionTable::hamming(nx),
        DistortionTable::hamming(nx),
    )
    .unwrap()
}

/// `p(y | a, x) p(z | a, y)`.
pub fn degraded(rng: &mut ChaCha8Rng, (nx, ny, nz, na): (usize, usize, usize, usize)) -> BroadcastModel {
    let px = pmf(rng, nx);
    let py = table(rng, na * nx, ny);
    let pz = table(rng, na * ny, nz);
    let mut vm = Vec::with_capacity(na * nx * ny * nz);
    for a in 0..na {
        for x in 0..nx {
            for y in 0..ny {
                for z in 0..nz {
                    vm.push(py[(a * nx + x) * ny + y] * pz[(a * ny + y) * nz + z]);
                }
            }
        }
    }
    let cost = costs(rng, na);
    BroadcastModel::from_tables(
        px,
        (ny, nz),
        vm,
        &cost,
        DistortionTable::hamming(nx),
        DistortionTable::hamming(nx),
        true,
    )
    .unwrap()
}

pub fn size(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
    rng.gen_range(lo..=hi)
}
