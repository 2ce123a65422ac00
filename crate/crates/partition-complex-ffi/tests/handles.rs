use std::ffi::{CStr, CString};
use std::ptr;

use partcx_ffi::*;

fn entries(t: *const PcxBettiTable) -> Vec<(i64, u64)> {
    unsafe {
        (0..pcx_table_len(t))
            .map(|i| {
                let (mut d, mut r) = (0, 0);
                assert_eq!(pcx_table_entry(t, i, &mut d, &mut r), PcxStatus::Ok);
                (d, r)
            })
            .collect()
    }
}

fn last_error() -> String {
    let p = pcx_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn partition_lattice_has_factorial_top_homology() {
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(pcx_partition_betti(5, ptr::null(), 0, 0, &mut t), PcxStatus::Ok);
        assert_eq!(entries(t), [(2, 24)]);
        assert_eq!(pcx_table_characteristic(t), 0);
        pcx_table_free(t);
    }
}

#[test]
fn group_generators_cross_the_boundary_as_strings() {
    let gens = [CString::new("(1 2 3 4)").unwrap()];
    let ptrs: Vec<_> = gens.iter().map(|g| g.as_ptr()).collect();
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(pcx_partition_betti(4, ptrs.as_ptr(), 1, 3, &mut t), PcxStatus::Ok);
        assert_eq!(pcx_table_characteristic(t), 3);
        pcx_table_free(t);

        let bad = [CString::new("(1 9)").unwrap()];
        let ptrs: Vec<_> = bad.iter().map(|g| g.as_ptr()).collect();
        assert_eq!(pcx_partition_betti(4, ptrs.as_ptr(), 1, 0, &mut t), PcxStatus::Argument);
        assert!(!last_error().is_empty());

        let nulls = [ptr::null()];
        assert_eq!(
            pcx_partition_betti(4, nulls.as_ptr(), 1, 0, &mut t),
            PcxStatus::NullPointer
        );
    }
}

#[test]
fn atoms_agree_with_their_closed_form() {
    for (n, ell, p) in [(2usize, 3usize, 2u64), (4, 2, 2), (3, 3, 3)] {
        let (mut computed, mut predicted) = (ptr::null_mut(), ptr::null_mut());
        unsafe {
            assert_eq!(pcx_atom_betti(n, ell, p, false, &mut computed), PcxStatus::Ok);
            assert_eq!(pcx_atom_betti(n, ell, p, true, &mut predicted), PcxStatus::Ok);
            assert!(pcx_table_equal(computed, predicted), "atom ({n}, {ell}) over F{p}");
            pcx_table_free(computed);
            pcx_table_free(predicted);
        }
    }
}

#[test]
fn statuses_follow_error_kinds() {
    let mut t = ptr::null_mut();
    let parts = [3usize, 3];
    unsafe {
        assert_eq!(pcx_quotient_betti(parts.as_ptr(), 2, 6, &mut t), PcxStatus::Argument);
        assert!(t.is_null());
        assert_eq!(pcx_quotient_betti(ptr::null(), 2, 0, &mut t), PcxStatus::NullPointer);
        assert_eq!(
            pcx_quotient_betti(parts.as_ptr(), 2, 0, ptr::null_mut()),
            PcxStatus::NullPointer
        );
        // The closed form needs an odd sphere dimension at odd primes.
        assert_eq!(pcx_atom_betti(3, 2, 3, true, &mut t), PcxStatus::Precondition);
        assert_eq!(pcx_quotient_betti(parts.as_ptr(), 2, 0, &mut t), PcxStatus::Ok);
    }
    // A successful call clears the previous message.
    assert!(pcx_last_error().is_null());
    unsafe { pcx_table_free(t) };
}

#[test]
fn witt_counts_report_overflow() {
    let mut out = 0u64;
    unsafe {
        assert_eq!(pcx_witt_count([1usize, 1, 1].as_ptr(), 3, &mut out), PcxStatus::Ok);
        assert_eq!(out, 2);
        assert_eq!(pcx_witt_count([20usize; 3].as_ptr(), 3, &mut out), PcxStatus::Overflow);
    }
}

#[test]
fn json_round_trips_through_c_strings() {
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(
            pcx_predicted_quotient_betti([2usize, 2, 2].as_ptr(), 3, 0, &mut t),
            PcxStatus::Ok
        );
        let s = pcx_table_to_json(t);
        let json: serde_json::Value = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        assert_eq!(json["field"], "Q");
        assert_eq!(json["betti"]["3"], 16);
        pcx_string_free(s);
        pcx_table_free(t);
    }
}

#[test]
fn null_handles_are_tolerated_by_accessors() {
    unsafe {
        assert_eq!(pcx_table_len(ptr::null()), 0);
        assert_eq!(pcx_table_rank(ptr::null(), 0), 0);
        assert!(!pcx_table_equal(ptr::null(), ptr::null()));
        assert!(pcx_table_to_json(ptr::null()).is_null());
        pcx_table_free(ptr::null_mut());
        pcx_string_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(pcx_version()) }.to_str().unwrap();
    assert!(v.ends_with("+partcx-complex-3"), "{v}");
}
