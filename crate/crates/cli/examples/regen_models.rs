//! Regenerates the example model corpus in canonical JSON form.
//!
//! Usage: cargo run -p lyzero-cli --example regen_models -- [dir]
//! (defaults to ./models)

use lyzero_core::{CouplingSpec, MeasureSpec, ModelSpec};

fn corpus() -> Vec<(&'static str, ModelSpec)> {
    vec![
        (
            "bc_single_theta2.json",
            ModelSpec {
                measure: MeasureSpec::BlumeCapel { theta: 2.0 },
                beta: 1.0,
                coupling: CouplingSpec::Dense {
                    n: 1,
                    entries: vec![0.0],
                },
            },
        ),
        (
            "chain4_theta1.2.json",
            ModelSpec {
                measure: MeasureSpec::BlumeCapel { theta: 1.2 },
                beta: 1.0,
                coupling: CouplingSpec::Chain {
                    n: 4,
                    j: 1.0,
                    periodic: false,
                },
            },
        ),
        (
            "chain10_ising.json",
            ModelSpec {
                measure: MeasureSpec::Ising,
                beta: 1.0,
                coupling: CouplingSpec::Chain {
                    n: 10,
                    j: 1.0,
                    periodic: false,
                },
            },
        ),
        (
            "chain3_periodic_ising.json",
            ModelSpec {
                measure: MeasureSpec::Ising,
                beta: 1.0,
                coupling: CouplingSpec::Chain {
                    n: 3,
                    j: 0.7,
                    periodic: true,
                },
            },
        ),
        (
            "hier4_theta1.35.json",
            ModelSpec {
                measure: MeasureSpec::BlumeCapel { theta: 1.35 },
                beta: 1.0,
                coupling: CouplingSpec::Hierarchical {
                    n: 2,
                    levels: vec![1.0, 1.0],
                    perm: None,
                },
            },
        ),
        (
            "hier8_theta1.3.json",
            ModelSpec {
                measure: MeasureSpec::BlumeCapel { theta: 1.3 },
                beta: 1.0,
                coupling: CouplingSpec::Hierarchical {
                    n: 3,
                    levels: vec![1.0, 0.8, 0.6],
                    perm: None,
                },
            },
        ),
        (
            "hier4_permuted.json",
            ModelSpec {
                measure: MeasureSpec::BlumeCapel { theta: 1.2 },
                beta: 1.0,
                coupling: CouplingSpec::Hierarchical {
                    n: 2,
                    levels: vec![1.0, 0.5],
                    perm: Some(vec![0, 2, 1, 3]),
                },
            },
        ),
        (
            "dilute_chain6.json",
            ModelSpec {
                measure: MeasureSpec::Dilute { q: 0.4 },
                beta: 1.2,
                coupling: CouplingSpec::Chain {
                    n: 6,
                    j: 0.8,
                    periodic: false,
                },
            },
        ),
        (
            "curie_weiss4_theta1.1.json",
            ModelSpec {
                measure: MeasureSpec::BlumeCapel { theta: 1.1 },
                beta: 1.0,
                coupling: CouplingSpec::Dense {
                    n: 4,
                    entries: vec![
                        0.0, 0.9, 0.9, 0.9, //
                        0.9, 0.0, 0.9, 0.9, //
                        0.9, 0.9, 0.0, 0.9, //
                        0.9, 0.9, 0.9, 0.0,
                    ],
                },
            },
        ),
    ]
}

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "models".into());
    std::fs::create_dir_all(&dir)?;
    for (name, spec) in corpus() {
        // sanity: every corpus entry must build
        spec.build().expect("corpus model builds");
        let path = std::path::Path::new(&dir).join(name);
        std::fs::write(&path, spec.canonical_json())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
