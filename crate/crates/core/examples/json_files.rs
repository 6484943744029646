//! Reading and writing the JSON documents used by the command line.
//!
//! `cargo run --example json_files`

use pgraphon::io::{graph_to_json, graphon_from_json, graphon_to_json, measure_from_json, Context};
use pgraphon::partition::format_rational;
use pgraphon::sampling::sample_g;
use serde_json::json;

fn main() -> pgraphon::Result<()> {
    let space = json!({ "points": ["0", "1"], "metric": [[0, 1], [1, 0]], "cemetery": "0" });
    let doc = json!({
        "space": space,
        "lengths": ["1/3", "2/3"],
        "cells": [[[0.1, 0.9], ["1/2", "1/2"]], [["1/2", "1/2"], [0.7, 0.3]]],
        "kind": "probability"
    });
    let w = graphon_from_json(&doc, &Context::default())?;
    let lengths: Vec<String> = w
        .partition()
        .lengths()
        .iter()
        .map(format_rational)
        .collect();
    println!("{} blocks, lengths {}", w.k(), lengths.join(" "));
    println!("{}", serde_json::to_string(&graphon_to_json(&w))?);

    let mu = measure_from_json(
        &json!({ "space": space, "mass": ["1/4", 0.75] }),
        &Context::default(),
    )?;
    println!("measure {:?}", mu.mass());

    let g = sample_g(&w, 4, 0, true)?;
    println!("{}", serde_json::to_string_pretty(&graph_to_json(&g))?);
    Ok(())
}
