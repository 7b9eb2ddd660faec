//! Compares the rayon kernels against their sequential twins.
//!
//! Two hot paths have `_seq` baselines: the coherent-state transform
//! (row-parallel over x₁) and the image-space Hamiltonian (slice-parallel
//! over x₂). Run with `cargo bench -p shearcst`; building without the
//! default `parallel` feature makes both sides of each pair sequential,
//! which is a quick way to check the rayon dispatch itself costs nothing.

use criterion::{criterion_group, criterion_main, Criterion};

use shearcst::cst::{cst_slice, cst_slice_seq, make_fiducial, FiducialSpec};
use shearcst::dynamics::{hamiltonian_shear, hamiltonian_shear_seq};
use shearcst::{ModelParams, PhaseVolume, SampledLine, UniformGrid};

/// Unit-norm Gaussian pair (signal at squeeze 1, analysis window at 1.5)
/// on a centered line of `count` points.
fn fiducial_pair(count: usize, p: &ModelParams) -> (SampledLine, SampledLine) {
    let grid = UniformGrid::centered(0.125, count).expect("line grid");
    let f = make_fiducial(&FiducialSpec::gaussian(1.0), grid, p).expect("signal");
    let phi = make_fiducial(&FiducialSpec::gaussian(1.5), grid, p).expect("window");
    (f, phi)
}

/// Transform image stacked over `n2` shear stations, `count`² points each.
fn image_volume(count: usize, n2: usize, p: &ModelParams) -> PhaseVolume {
    let (f, phi) = fiducial_pair(count, p);
    let slices = (0..n2)
        .map(|k| {
            let x2 = -0.25 + k as f64 / 16.0;
            cst_slice(&f, &phi, x2, p).expect("transform slice")
        })
        .collect();
    PhaseVolume::from_slices(slices).expect("volume")
}

pub fn bench_transform_rows(c: &mut Criterion) {
    let p = ModelParams::default();
    for count in [64, 256] {
        let (f, phi) = fiducial_pair(count, &p);
        c.bench_function(&format!("cst_slice rayon {count}x{count}"), |bench| {
            bench.iter(|| cst_slice(&f, &phi, 0.25, &p).expect("transform"));
        });
        c.bench_function(&format!("cst_slice sequential {count}x{count}"), |bench| {
            bench.iter(|| cst_slice_seq(&f, &phi, 0.25, &p).expect("transform"));
        });
    }
}

pub fn bench_hamiltonian_slices(c: &mut Criterion) {
    let p = ModelParams::default();
    for (count, n2) in [(128, 9), (64, 33)] {
        let volume = image_volume(count, n2, &p);
        c.bench_function(&format!("hamiltonian_shear rayon {n2}x{count}x{count}"), |bench| {
            bench.iter(|| hamiltonian_shear(&volume, &p).expect("apply"));
        });
        c.bench_function(
            &format!("hamiltonian_shear sequential {n2}x{count}x{count}"),
            |bench| {
                bench.iter(|| hamiltonian_shear_seq(&volume, &p).expect("apply"));
            },
        );
    }
}

criterion_group!(benches, bench_transform_rows, bench_hamiltonian_slices);
criterion_main!(benches);
