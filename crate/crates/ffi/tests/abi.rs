use std::ffi::{c_char, c_int, CString};
use std::ptr;

use pathcat::fincat::interval;
use pathcat::pathcat::build_path_category;
use pathcat_ffi::*;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn last_error() -> String {
    let mut needed = 0usize;
    unsafe {
        assert_eq!(pathcat_last_error(ptr::null_mut(), 0, &mut needed), PathcatStatus::Ok);
        let mut buf = vec![0u8; needed];
        assert_eq!(pathcat_last_error(buf.as_mut_ptr().cast(), buf.len(), &mut needed), PathcatStatus::Ok);
        buf.pop();
        String::from_utf8(buf).unwrap()
    }
}

type Copy = unsafe extern "C" fn(*const PathcatReport, *mut c_char, usize, *mut usize) -> PathcatStatus;

fn read(r: *const PathcatReport, f: Copy) -> String {
    let mut needed = 0usize;
    unsafe {
        assert_eq!(f(r, ptr::null_mut(), 0, &mut needed), PathcatStatus::Ok);
        let mut buf = vec![0u8; needed];
        assert_eq!(f(r, buf.as_mut_ptr().cast(), buf.len(), ptr::null_mut()), PathcatStatus::Ok);
        buf.pop();
        String::from_utf8(buf).unwrap()
    }
}

fn run(args: &[&str]) -> (c_int, String, String) {
    let owned: Vec<CString> = args.iter().map(|a| CString::new(*a).unwrap()).collect();
    let argv: Vec<*const c_char> = owned.iter().map(|a| a.as_ptr()).collect();
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(pathcat_run(argv.len() as c_int, argv.as_ptr(), &mut r), PathcatStatus::Ok);
        let mut code = -1;
        assert_eq!(pathcat_report_exit_code(r, &mut code), PathcatStatus::Ok);
        let out = (code, read(r, pathcat_report_stdout), read(r, pathcat_report_stderr));
        pathcat_report_free(r);
        out
    }
}

#[test]
fn delta_counts_are_multiset_coefficients() {
    for m in 0..5 {
        for n in 1..5 {
            let mut out = 0;
            assert_eq!(unsafe { pathcat_delta_hom_count(m, n, &mut out) }, PathcatStatus::Ok);
            assert_eq!(out, binomial(n + m - 1, m), "m={m} n={n}");
        }
    }
}

#[test]
fn category_handles_report_sizes() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(pathcat_category_interval(2, &mut c), PathcatStatus::Ok);
        let (mut objs, mut arrows) = (0, 0);
        assert_eq!(pathcat_category_object_count(c, &mut objs), PathcatStatus::Ok);
        assert_eq!(pathcat_category_arrow_count(c, &mut arrows), PathcatStatus::Ok);
        assert_eq!((objs, arrows), (3, 6));
        pathcat_category_free(c);

        let names: Vec<CString> = ["a", "b", "c"].iter().map(|s| CString::new(*s).unwrap()).collect();
        let ptrs: Vec<*const c_char> = names.iter().map(|s| s.as_ptr()).collect();
        assert_eq!(pathcat_category_coarse(ptrs.as_ptr(), 3, &mut c), PathcatStatus::Ok);
        assert_eq!(pathcat_category_arrow_count(c, &mut arrows), PathcatStatus::Ok);
        assert_eq!(arrows, 9);
        pathcat_category_free(c);
    }
}

#[test]
fn path_category_matches_the_library() {
    let expected = build_path_category(&interval(2), 3).unwrap();
    unsafe {
        let mut c = ptr::null_mut();
        let mut p = ptr::null_mut();
        assert_eq!(pathcat_category_interval(2, &mut c), PathcatStatus::Ok);
        assert_eq!(pathcat_path_category_build(c, 3, &mut p), PathcatStatus::Ok);
        let (mut chains, mut rels, mut hom) = (0, 0, 0);
        assert_eq!(pathcat_path_category_chain_count(p, &mut chains), PathcatStatus::Ok);
        assert_eq!(pathcat_path_category_relation_count(p, &mut rels), PathcatStatus::Ok);
        assert_eq!(chains, expected.chain_count());
        assert_eq!(rels, expected.relation_count());
        assert_eq!(pathcat_path_category_hom_size(p, 0, 2, &mut hom), PathcatStatus::Ok);
        assert_eq!(hom, expected.path_hom(0, 2).chains.len());
        assert_eq!(pathcat_path_category_hom_size(p, 0, 3, &mut hom), PathcatStatus::OutOfRange);
        assert!(last_error().contains("out of range"));
        pathcat_path_category_free(p);
        pathcat_category_free(c);
    }
}

#[test]
fn errors_are_reported_through_status_codes() {
    unsafe {
        let mut c = ptr::null_mut();
        let mut p = ptr::null_mut();
        assert_eq!(pathcat_category_interval(1, ptr::null_mut()), PathcatStatus::NullPointer);
        assert_eq!(last_error(), "out is null");
        assert_eq!(pathcat_category_object_count(ptr::null(), &mut 0), PathcatStatus::NullPointer);

        let dup: Vec<CString> = ["a", "a"].iter().map(|s| CString::new(*s).unwrap()).collect();
        let ptrs: Vec<*const c_char> = dup.iter().map(|s| s.as_ptr()).collect();
        assert_eq!(pathcat_category_coarse(ptrs.as_ptr(), 2, &mut c), PathcatStatus::InvalidInput);

        let bad = [0xffu8, 0];
        let ptrs = [bad.as_ptr().cast::<c_char>()];
        assert_eq!(pathcat_category_coarse(ptrs.as_ptr(), 1, &mut c), PathcatStatus::InvalidUtf8);

        assert_eq!(pathcat_category_interval(1, &mut c), PathcatStatus::Ok);
        assert_eq!(pathcat_path_category_build(c, 0, &mut p), PathcatStatus::InvalidInput);
        pathcat_category_free(c);

        let mut small = [0 as c_char; 2];
        let mut r = ptr::null_mut();
        let argv = [c"pathcat".as_ptr(), c"simplicial".as_ptr()];
        assert_eq!(pathcat_run(2, argv.as_ptr(), &mut r), PathcatStatus::Ok);
        assert_eq!(pathcat_report_stdout(r, small.as_mut_ptr(), 2, ptr::null_mut()), PathcatStatus::BufferTooSmall);
        pathcat_report_free(r);

        pathcat_category_free(ptr::null_mut());
        pathcat_path_category_free(ptr::null_mut());
        pathcat_report_free(ptr::null_mut());
    }
}

#[test]
fn command_line_runs_through_the_abi() {
    let (code, out, err) = run(&["pathcat", "--max-len", "3", "path", "--category", "One", "--check", "delta-iso"]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.contains("PASS"));
    assert!(err.is_empty());

    let (code, _, err) = run(&["pathcat", "frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("FAIL UnknownCommand"), "{err}");
}
