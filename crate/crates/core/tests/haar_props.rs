use gqt_core::haar::{
    haar_apply_basis, haar_inverse_apply, haar_inverse_circuit, haar_matrix,
    haar_matrix_identity_check, inverse_gate_bound, inverse_swap_count, register_index,
    register_slots, HaarKet,
};
use gqt_core::qstate::{apply_circuit, apply_dense, QState};
use gqt_core::Limits;

#[test]
fn integer_identity_holds_for_every_column() {
    let l = Limits::default();
    for n in 1..=8 {
        let h = haar_matrix(n, &l).unwrap();
        for x in 0..1usize << n {
            assert!(haar_matrix_identity_check(&h, &register_slots(x, n)).unwrap(), "n {n} x {x}");
        }
    }
}

#[test]
fn rows_orthonormal_and_entries_ternary() {
    let l = Limits::default();
    for n in 1..=8 {
        let h = haar_matrix(n, &l).unwrap();
        assert!(h.p().unitarity_error() < 1e-10, "n = {n}");
        for row in h.a_rows() {
            assert!(row.iter().all(|v| (-1..=1).contains(v)));
            assert!(row.iter().any(|&v| v != 0));
        }
    }
}

#[test]
fn closed_form_matches_columns() {
    let l = Limits::default();
    for n in 1..=8 {
        let h = haar_matrix(n, &l).unwrap();
        for x in 0..1usize << n {
            let slots = register_slots(x, n);
            assert_eq!(register_index(&slots), x);
            let s = haar_apply_basis(&slots, &l).unwrap();
            let nonzero = s.amplitudes().iter().filter(|a| a.norm() > 1e-12).count();
            assert_eq!(nonzero, n + 1);
            for y in 0..1usize << n {
                assert!((s.amplitude(y) - h.p()[(y, x)]).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn inverse_round_trip() {
    let l = Limits::default();
    for n in 1..=6 {
        let h = haar_matrix(n, &l).unwrap();
        let pt = h.p().adjoint();
        for idx in 0..1usize << n {
            let ket = HaarKet::from_index(n, idx).unwrap();
            let inv = haar_inverse_apply(n, &ket, &l).unwrap();
            let via_matrix = apply_dense(&QState::basis(n, idx).unwrap(), &pt).unwrap();
            assert!(inv.max_abs_diff(&via_matrix) < 1e-10);
            // P^† P |x> = |x>
            let fwd = haar_apply_basis(&register_slots(idx, n), &l).unwrap();
            let back = apply_dense(&fwd, &pt).unwrap();
            assert!(back.max_abs_diff(&QState::basis(n, idx).unwrap()) < 1e-10);
        }
    }
}

#[test]
fn inverse_circuit_reproduces_closed_form() {
    let l = Limits::default();
    for n in 1..=6 {
        for level in 0..n {
            let c = haar_inverse_circuit(n, level).unwrap();
            assert_eq!(c.swap_count(), inverse_swap_count(n, level));
            assert_eq!(c.swap_count(), (level + 1) * (n - level - 1) + level);
            assert!(c.len() <= inverse_gate_bound(n));
            for p in 0..1usize << level {
                let prefix = (0..level).map(|k| ((p >> k) & 1) as u8).collect();
                let ket = HaarKet::Detail { level, prefix };
                let input = QState::basis(n, ket.index(n).unwrap()).unwrap();
                let got = apply_circuit(&input, &c).unwrap();
                let want = haar_inverse_apply(n, &ket, &l).unwrap();
                assert!(got.max_abs_diff(&want) < 1e-10, "n {n} level {level} prefix {p}");
            }
        }
    }
}
