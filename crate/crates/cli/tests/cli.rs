use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use persmod::barcode::Barcode;
use persmod::decomposition::decompose;
use persmod::field::PrimeField;
use persmod::grid::GridModule;
use tempfile::TempDir;

const HEADER: &str = "degree,lo,hi,lo_closed,hi_closed,multiplicity\n";

fn persmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_persmod"))
        .args(args)
        .env_remove("PERSIST_FIELD")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Self(tempfile::tempdir().unwrap())
    }

    fn put(&self, name: &str, contents: &str) -> String {
        let p = self.0.path().join(name);
        fs::write(&p, contents).unwrap();
        p.to_str().unwrap().to_owned()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn point_barcode() {
    let f = Files::new();
    let pt = f.put("pt.txt", "v 0 0\n");
    let o = persmod(&["barcode", &pt, "--degree", "0", "--field", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), format!("{HEADER}0,0,inf,true,false,1\n"));
}

#[test]
fn empty_file_gives_header_only() {
    let f = Files::new();
    let e = f.put("empty.txt", "");
    let o = persmod(&["barcode", &e]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), HEADER);
}

#[test]
fn triangle_boundary_has_one_loop() {
    let f = Files::new();
    let tri = f.put("tri.txt", "v 0 0\nv 1 0\nv 2 0\ns 0 1\ns 1 2\ns 0 2\n");
    let o = persmod(&["barcode", &tri, "--degree", "1"]);
    assert_eq!(stdout(&o), format!("{HEADER}1,0,inf,true,false,1\n"));
}

#[test]
fn field_defaults_from_environment() {
    let f = Files::new();
    let tri = f.put("tri.txt", "v 0 0\nv 1 1\ns 0 1\n");
    let o = Command::new(env!("CARGO_BIN_EXE_persmod"))
        .args(["barcode", &tri])
        .env("PERSIST_FIELD", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_persmod"))
        .args(["barcode", &tri])
        .env("PERSIST_FIELD", "4")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn parse_errors_report_the_line() {
    let f = Files::new();
    let bad = f.put("bad.txt", "v 0 0\nv 1 zero\n");
    let o = persmod(&["barcode", &bad]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn non_monotone_filtration_names_the_simplex() {
    let f = Files::new();
    let bad = f.put("nm.txt", "v 0 0\nv 1 0\ns 0 1 -1\n");
    let o = persmod(&["barcode", &bad]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("{0,1}"));
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(code(&persmod(&[])), 1);
    assert_eq!(code(&persmod(&["barcode"])), 1);
    assert_eq!(code(&persmod(&["frobnicate"])), 1);
    assert_eq!(code(&persmod(&["--help"])), 0);
    assert_eq!(code(&persmod(&["--version"])), 0);
    assert_eq!(code(&persmod(&["barcode", "/nonexistent/file"])), 1);
}

#[test]
fn extended_point() {
    let f = Files::new();
    let pt = f.put("pt.txt", "v 0 0\n");
    let o = persmod(&["extended", &pt, "--spacing", "1"]);
    assert_eq!(stdout(&o), format!("{HEADER}0,0,1,true,false,1\n"));
    assert_eq!(code(&persmod(&["extended", &pt, "--spacing", "0"])), 2);
    assert_eq!(code(&persmod(&["extended", &pt, "--spacing", "-1/2"])), 2);
}

#[test]
fn extended_bars_are_finite() {
    let f = Files::new();
    let k = f.put(
        "k.txt",
        "v 0 0\nv 1 2\nv 2 1\nv 3 3/2\ns 0 1\ns 1 2\ns 0 2\ns 2 3\n",
    );
    for degree in ["0", "1", "2"] {
        let o = persmod(&["extended", &k, "--degree", degree]);
        assert_eq!(code(&o), 0);
        let b = Barcode::from_csv_str(&stdout(&o)).unwrap();
        assert!(b.iter().all(|(_, i, _)| i.hi().unwrap().is_finite()));
    }
}

#[test]
fn bottleneck_examples() {
    let f = Files::new();
    let a = f.put("a.csv", &format!("{HEADER}0,0,10,true,true,1\n"));
    let b = f.put(
        "b.csv",
        &format!("{HEADER}0,1,9,true,true,1\n0,4,5,true,true,1\n"),
    );
    let ray = f.put("ray.csv", &format!("{HEADER}0,0,inf,true,false,1\n"));
    let empty = f.put("e.csv", HEADER);
    assert_eq!(stdout(&persmod(&["bottleneck", &a, &a])), "0\n");
    assert_eq!(stdout(&persmod(&["bottleneck", &a, &b, "--degree", "0"])), "1\n");
    assert_eq!(stdout(&persmod(&["bottleneck", &ray, &empty])), "inf\n");
    let w = stdout(&persmod(&["bottleneck", &a, &b, "--witness"]));
    assert!(w.starts_with("1\n# degree 0: 1\n"));
    assert!(w.contains("[0, 10] <-> [1, 9]"));
}

#[test]
fn bottleneck_rejects_malformed_csv() {
    let f = Files::new();
    let a = f.put("a.csv", &format!("{HEADER}0,0,10,true,true,1\n"));
    let bad = f.put("bad.csv", &format!("{HEADER}0,3,1,true,true,1\n"));
    let noheader = f.put("nh.csv", "0,0,1,true,true,1\n");
    assert_eq!(code(&persmod(&["bottleneck", &a, &bad])), 1);
    assert_eq!(code(&persmod(&["bottleneck", &a, &noheader])), 1);
}

#[test]
fn kic_identity_map() {
    let f = Files::new();
    let x = f.put("x.txt", "v 0 0\nv 1 1\nv 2 2\ns 0 1\ns 1 2\ns 0 2\n");
    let map = f.put("id.txt", "m 0 0\nm 1 1\nm 2 2\n");
    let own = stdout(&persmod(&["barcode", &x, "--degree", "1"]));
    let o = persmod(&["kic", &x, &x, &map, "--degree", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        format!("# kernel\n{HEADER}# image\n{own}# cokernel\n{HEADER}")
    );
}

#[test]
fn kic_collapse_of_two_points() {
    let f = Files::new();
    let x = f.put("x.txt", "v 0 0\n");
    let y = f.put("y.txt", "v 0 0\nv 1 0\n");
    let map = f.put("m.txt", "m 0 0\nm 1 0\n");
    let out = f.path("out");
    let o = persmod(&["kic", &x, &y, &map, "--out-dir", path_str(&out)]);
    assert_eq!(code(&o), 0);
    let read = |n: &str| Barcode::from_csv_str(&fs::read_to_string(out.join(n)).unwrap()).unwrap();
    assert_eq!(read("kernel.csv").len(), 1);
    assert_eq!(read("image.csv").len(), 1);
    assert!(read("cokernel.csv").is_empty());
}

#[test]
fn kic_incompatibility_names_the_simplex() {
    let f = Files::new();
    let x = f.put("x.txt", "v 0 1\n");
    let y = f.put("y.txt", "v 0 0\nv 1 0\n");
    let map = f.put("m.txt", "m 0 0\nm 1 0\n");
    let o = persmod(&["kic", &x, &y, &map]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("{0}"));
}

#[test]
fn kic_rejects_non_simplicial_maps() {
    let f = Files::new();
    let x = f.put("x.txt", "v 0 0\nv 1 0\n");
    let y = f.put("y.txt", "v 0 0\nv 1 0\ns 0 1\n");
    let map = f.put("m.txt", "m 0 0\nm 1 1\n");
    assert_eq!(code(&persmod(&["kic", &x, &y, &map])), 1);
}

#[test]
fn stability_reports_no_violations() {
    let f = Files::new();
    let csv = f.path("trials.csv");
    let args = [
        "stability", "--mode", "ordinary", "--trials", "30", "--seed", "7", "--vertices", "6",
        "--dim", "2", "--csv", path_str(&csv),
    ];
    let o = persmod(&args);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("violations 0"));
    let first = fs::read_to_string(&csv).unwrap();
    assert!(first.starts_with("trial,simplices,norm,degree,quantity,distance,holds\n"));
    assert!(!first.contains(",false\n"));
    let again = persmod(&args);
    assert_eq!(stdout(&again), text);
    assert_eq!(fs::read_to_string(&csv).unwrap(), first);
}

#[test]
fn stability_modes_and_bad_flags() {
    for mode in ["extended", "kic"] {
        let o = persmod(&["stability", "--mode", mode, "--trials", "10", "--vertices", "5"]);
        assert_eq!(code(&o), 0, "{mode}");
        assert!(stdout(&o).contains("violations 0"));
    }
    assert_eq!(code(&persmod(&["stability", "--trials", "0"])), 1);
    assert_eq!(code(&persmod(&["stability", "--mode", "sideways"])), 1);
    assert_eq!(code(&persmod(&["stability", "--spacing", "0"])), 2);
}

#[test]
fn barcode_round_trip_through_synthesis() {
    let f = Files::new();
    let k = f.put(
        "k.txt",
        "v 0 0\nv 1 1/2\nv 2 1\nv 3 3\nv 4 -1\ns 0 1 2\ns 2 3\ns 3 4\ns 0 4\ns 1 3\n",
    );
    for degree in 0..3usize {
        let d = degree.to_string();
        let o = persmod(&["barcode", &k, "--degree", &d, "--field", "3"]);
        let b = Barcode::from_csv_str(&stdout(&o)).unwrap();
        let m = GridModule::synthesize(PrimeField::new(3).unwrap(), &b, degree);
        assert_eq!(decompose(&m, degree), b);
    }
}

#[test]
fn diagrams_are_deterministic() {
    let f = Files::new();
    let csv = f.put(
        "b.csv",
        &format!("{HEADER}0,0,1,true,false,1\n0,0,inf,true,false,1\n1,1/2,2,true,false,3\n"),
    );
    let (a, b) = (f.path("a.svg"), f.path("b.svg"));
    assert_eq!(code(&persmod(&["diagram", &csv, "--out", path_str(&a)])), 0);
    assert_eq!(code(&persmod(&["diagram", &csv, "--out", path_str(&b)])), 0);
    let svg = fs::read_to_string(&a).unwrap();
    assert_eq!(svg, fs::read_to_string(&b).unwrap());
    assert_eq!(svg.matches("<circle").count(), 3);
    assert!(svg.contains("×3"));
    assert_eq!(stdout(&persmod(&["diagram", &csv])), svg);
}

#[test]
fn diagram_of_one_bar_and_of_nothing() {
    let f = Files::new();
    let one = f.put("one.csv", &format!("{HEADER}0,0,1,true,true,1\n"));
    let svg = stdout(&persmod(&["diagram", &one]));
    assert_eq!(svg.matches("<circle").count(), 1);
    assert!(svg.contains(r#"data-lo="0" data-hi="1""#));
    let empty = f.put("e.csv", HEADER);
    let svg = stdout(&persmod(&["diagram", &empty]));
    assert!(svg.contains(r#"class="diagonal""#));
    assert!(!svg.contains("<circle"));
    let bad = f.put("bad.csv", "nonsense\n");
    assert_eq!(code(&persmod(&["diagram", &bad])), 1);
}
