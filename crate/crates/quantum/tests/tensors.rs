use nalgebra::{Complex, Matrix2, Rotation3, SMatrix, Unit, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};

use tightbell_quantum::state::su2;
use tightbell_quantum::{CorrelationTensor, LocalFrames, ThreeQubitState, C64};

fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

fn paulis() -> [Matrix2<C64>; 3] {
    [
        Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
        Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)),
        Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)),
    ]
}

/// Trace of ρ against explicit Kronecker products of Pauli matrices.
fn kron_oracle(s: &ThreeQubitState) -> [f64; 27] {
    let rho = s.density_matrix();
    let p = paulis();
    std::array::from_fn(|n| {
        let op = p[n / 9].kronecker(&p[(n / 3) % 3]).kronecker(&p[n % 3]);
        let op = SMatrix::<C64, 8, 8>::from_fn(|i, j| op[(i, j)]);
        (rho * op).trace().re
    })
}

fn assert_close(a: &[f64; 27], b: &[f64; 27], tol: f64) {
    for n in 0..27 {
        assert!((a[n] - b[n]).abs() < tol, "entry {n}: {} vs {}", a[n], b[n]);
    }
}

#[test]
fn ghz_tensor() {
    let t = ThreeQubitState::ghz().correlation_tensor().unwrap();
    let mut expected = [0.0; 27];
    expected[0] = 1.0;
    for (i, j, k) in [(0, 1, 1), (1, 0, 1), (1, 1, 0)] {
        expected[9 * i + 3 * j + k] = -1.0;
    }
    assert_close(t.data(), &expected, 1e-12);
    assert_close(&kron_oracle(&ThreeQubitState::ghz()), &expected, 1e-12);
}

#[test]
fn basis_and_mixed_examples() {
    let t = ThreeQubitState::basis(0).correlation_tensor().unwrap();
    let mut e = [0.0; 27];
    e[26] = 1.0;
    assert_close(t.data(), &e, 1e-15);
    let t = ThreeQubitState::maximally_mixed().correlation_tensor().unwrap();
    assert_close(t.data(), &[0.0; 27], 1e-15);
}

#[test]
fn random_states_match_kron_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 0..200 {
        let s = match n % 3 {
            0 => ThreeQubitState::random_pure(&mut rng),
            1 => ThreeQubitState::random_mixed(&mut rng, 1 + n % 8),
            _ => ThreeQubitState::random_product(&mut rng),
        };
        let t = s.correlation_tensor().unwrap();
        assert_close(t.data(), &kron_oracle(&s), 1e-12);
        let pure_as_mixed = ThreeQubitState::mixed(s.density_matrix()).unwrap();
        assert_close(pure_as_mixed.correlation_tensor().unwrap().data(), t.data(), 1e-12);
    }
}

#[test]
fn entries_from_flat_lists() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![c(0.0, 0.0); 8];
    amps[0] = c(h, 0.0);
    amps[7] = c(h, 0.0);
    assert_eq!(ThreeQubitState::from_entries(&amps).unwrap(), ThreeQubitState::ghz());
    let rho = ThreeQubitState::ghz().density_matrix();
    let flat: Vec<C64> = (0..64).map(|n| rho[(n / 8, n % 8)]).collect();
    assert!(matches!(ThreeQubitState::from_entries(&flat).unwrap(), ThreeQubitState::Mixed(_)));
    assert!(ThreeQubitState::from_entries(&flat[..10]).is_err());
}

#[test]
fn frame_covariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 0..200 {
        let s = if n % 2 == 0 {
            ThreeQubitState::random_pure(&mut rng)
        } else {
            ThreeQubitState::random_mixed(&mut rng, 3)
        };
        let t = s.correlation_tensor().unwrap();
        let axes: [Vector3<f64>; 3] = std::array::from_fn(|_| Vector3::from(UnitSphere.sample(&mut rng)));
        let angles: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.0..std::f64::consts::TAU));
        let u: [Matrix2<C64>; 3] = std::array::from_fn(|p| su2(&axes[p], angles[p]));
        let r: [nalgebra::Matrix3<f64>; 3] = std::array::from_fn(|p| {
            Rotation3::from_axis_angle(&Unit::new_normalize(axes[p]), angles[p]).into_inner()
        });
        let direct = s.apply_local_unitaries(&u).correlation_tensor().unwrap();
        assert_close(direct.data(), t.rotated(&r).data(), 1e-9);
        // Components in a rotated frame are the same contraction with the frame transposed.
        let frames = LocalFrames::new(r.map(|m| m.transpose())).unwrap();
        assert_close(t.in_frames(&frames).data(), direct.data(), 1e-9);
    }
}

#[test]
fn rotation_preserves_norm() {
    let t = ThreeQubitState::ghz().correlation_tensor().unwrap();
    let f = LocalFrames::from_euler(&[0.1, 0.2, 0.3, 1.0, 2.0, 3.0, -1.0, 0.5, 0.0]);
    assert!((t.in_frames(&f).frobenius_sq() - t.frobenius_sq()).abs() < 1e-12);
    assert_eq!(CorrelationTensor::zeros().frobenius_sq(), 0.0);
}
