use std::process::{Command, Output};

fn sfcurve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sfcurve")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn encode_decode() {
    let out = sfcurve(&["encode", "--curve", "z", "--i", "2", "--j", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "13\n");

    let out = sfcurve(&["encode", "--curve", "hilbert", "--i", "123456", "--j", "7"]);
    let h = stdout(&out);
    let back = sfcurve(&["decode", "--curve", "hilbert", "--h", h.trim()]);
    assert_eq!(stdout(&back), "123456,7\n");
}

#[test]
fn exit_codes() {
    assert_eq!(sfcurve(&["encode", "--i", "-3", "--j", "0"]).status.code(), Some(2));
    assert_eq!(sfcurve(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        sfcurve(&["encode", "--curve", "canonic", "--i", "0", "--j", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        sfcurve(&["generate", "--n", "3", "--m", "3", "--shape", "tri"])
            .status
            .code(),
        Some(2)
    );

    let out = sfcurve(&["generate", "--n", "2", "--m", "40"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("tiles"));
}

#[test]
fn generate_csv_parses() {
    let out = sfcurve(&["generate", "--n", "6", "--m", "5"]);
    assert!(out.status.success());
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["h", "i", "j"]);
    let rows: Vec<(u64, u32, u32)> = rdr.deserialize().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 30);
    assert!(rows.iter().enumerate().all(|(k, r)| r.0 == k as u64));
}

#[test]
fn generate_svg() {
    let out = sfcurve(&["generate", "--n", "4", "--m", "4", "--format", "svg"]);
    let svg = stdout(&out);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<polyline").count(), 1);
    assert!(svg.contains(r#"width="40" height="40""#));
}

#[test]
fn bench_matmul() {
    let out = sfcurve(&[
        "bench",
        "matmul",
        "--n",
        "64",
        "--orders",
        "nested,hilbert",
        "--fractions",
        "0.05,0.1,0.2",
    ]);
    assert!(out.status.success());
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["order", "fraction", "misses", "accesses"]);
    let rows: Vec<(String, f64, u64, u64)> = rdr.deserialize().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    for k in 0..3 {
        assert_eq!(rows[k].0, "nested");
        assert_eq!(rows[k + 3].0, "hilbert");
        assert!(rows[k + 3].2 <= rows[k].2);
    }
}
