#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_pgraphon")
}

pub fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Input files for every verb, written under `dir`.
pub struct Fixtures {
    pub mu: PathBuf,
    pub nu: PathBuf,
    pub kernel: PathBuf,
    pub big_kernel: PathBuf,
    pub u: PathBuf,
    pub w: PathBuf,
    pub w_relabeled: PathBuf,
    pub graph: PathBuf,
    pub f: PathBuf,
    pub fine: PathBuf,
}

fn write(dir: &Path, name: &str, v: Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    p
}

pub fn fixtures(dir: &Path) -> Fixtures {
    // shared by reference from the other documents
    write(
        dir,
        "space.json",
        json!({ "points": ["0", "1"], "metric": [[0, 1], [1, 0]], "cemetery": null }),
    );
    let three = json!({
        "points": ["a", "b", "none"],
        "metric": [[0, 1, 2], [1, 0, 1], [2, 1, 0]],
        "cemetery": "none"
    });
    let p = |x: f64| vec![1.0 - x, x];
    let fine_cells: Vec<Vec<Vec<f64>>> = (0..9)
        .map(|i| {
            (0..9)
                .map(|j| p(((i * 7 + j * 3) % 10) as f64 / 10.0))
                .collect()
        })
        .collect();
    let big_cells: Vec<Vec<Vec<f64>>> = (0..16)
        .map(|i| {
            (0..16)
                .map(|j| {
                    vec![
                        ((i * 5 + j * 11) % 7) as f64 / 7.0 - 0.5,
                        ((i + 2 * j) % 5) as f64 / 5.0 - 0.4,
                    ]
                })
                .collect()
        })
        .collect();
    Fixtures {
        mu: write(
            dir,
            "mu.json",
            json!({ "space": "space.json", "mass": [0.25, 0.75] }),
        ),
        nu: write(
            dir,
            "nu.json",
            json!({ "space": "space.json", "mass": ["1/2", "0.5"] }),
        ),
        kernel: write(
            dir,
            "kernel.json",
            json!({
                "space": "space.json",
                "lengths": ["1/2", "1/2"],
                "cells": [[[-0.2, 0.2], [0.2, -0.2]], [[0.2, -0.2], [-0.2, 0.2]]],
                "kind": "signed"
            }),
        ),
        big_kernel: write(
            dir,
            "big_kernel.json",
            json!({
                "space": "space.json",
                "lengths": vec!["1/16"; 16],
                "cells": big_cells,
                "kind": "signed"
            }),
        ),
        u: write(
            dir,
            "u.json",
            json!({
                "space": "space.json",
                "lengths": ["1/3", "2/3"],
                "cells": [[p(0.9), p(0.2)], [p(0.2), p(0.6)]]
            }),
        ),
        w: write(
            dir,
            "w.json",
            json!({
                "space": "space.json",
                "lengths": ["1/3", "1/3", "1/3"],
                "cells": [[p(0.1), p(0.5), p(0.3)], [p(0.5), p(0.8), p(0.4)], [p(0.3), p(0.4), p(0.7)]]
            }),
        ),
        w_relabeled: write(
            dir,
            "w_relabeled.json",
            json!({
                "space": "space.json",
                "lengths": ["1/3", "1/3", "1/3"],
                "cells": [[p(0.7), p(0.3), p(0.4)], [p(0.3), p(0.1), p(0.5)], [p(0.4), p(0.5), p(0.8)]]
            }),
        ),
        graph: write(
            dir,
            "graph.json",
            json!({
                "space": three,
                "n": 3,
                "weights": [["none", "a", "b"], ["b", "none", "a"], [0, 1, null]],
                "symmetric": false
            }),
        ),
        f: write(
            dir,
            "f.json",
            json!({ "v": 3, "edges": [[0, 1], [1, 2], [2, 0]], "decorations": { "family_indices": [1, 2, 0] } }),
        ),
        fine: write(
            dir,
            "fine.json",
            json!({ "space": "space.json", "lengths": vec!["1/9"; 9], "cells": fine_cells }),
        ),
    }
}

impl Fixtures {
    /// One invocation per verb, all seeded.
    pub fn invocations(&self) -> Vec<Vec<String>> {
        let s = |p: &PathBuf| p.display().to_string();
        let v = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let mut out = vec![
            [
                v(&["dist", "--metric", "prohorov"]),
                vec![s(&self.mu), s(&self.nu)],
            ]
            .concat(),
            [
                v(&["cutnorm", "--mode", "heuristic", "--seed", "4"]),
                vec![s(&self.big_kernel)],
            ]
            .concat(),
            [
                v(&["cutdist", "--metric", "kr"]),
                vec![s(&self.u), s(&self.w)],
            ]
            .concat(),
            [
                v(&[
                    "delta",
                    "--mode",
                    "anneal",
                    "--granularity",
                    "6",
                    "--seed",
                    "9",
                ]),
                vec![s(&self.u), s(&self.w)],
            ]
            .concat(),
            [v(&["sample", "--k", "12", "--seed", "5"]), vec![s(&self.w)]].concat(),
            [
                v(&["homdens", "--samples", "2000", "--seed", "3"]),
                vec![s(&self.f), s(&self.w)],
            ]
            .concat(),
            [
                v(&["regularize", "--target", "4", "--seed", "2"]),
                vec![s(&self.fine)],
            ]
            .concat(),
        ];
        out.push(v(&["verify", "norms", "--trials", "5", "--seed", "8"]));
        out
    }
}
