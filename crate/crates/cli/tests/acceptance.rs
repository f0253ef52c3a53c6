//! End-to-end acceptance run: one line per criterion, then a single verdict.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use canonical24::branch::{compose_delta_psi, fixtures, BranchConfig};
use canonical24::canring::{dim_a, dim_r, slot_table};
use canonical24::elim::{closed_form_delta, decompose_quadratic, sylvester_resultant_u};
use canonical24::{random_bipoly, BiDegree, QBiPoly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_canonical24");

struct Workspace {
    dir: tempfile::TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace { dir: tempfile::tempdir().unwrap() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(BIN).args(args).current_dir(self.dir.path()).output().unwrap()
    }

    fn sample(&self, seed: u64, name: &str) -> Result<PathBuf, String> {
        let out = self.run(&["sample", "--seed", &seed.to_string(), "--coeff-bound", "10", "--max-tries", "100", "-o", name]);
        match out.status.code() {
            Some(0) => Ok(self.path(name)),
            c => Err(format!("sample seed {seed} exited {c:?}: {}", String::from_utf8_lossy(&out.stderr))),
        }
    }

    fn write_config(&self, name: &str, c: &BranchConfig) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, serde_json::to_string_pretty(c).unwrap()).unwrap();
        p
    }

    fn ring(&self, config: &Path, max_degree: usize, report: &str) -> Result<(Value, Duration), String> {
        let start = Instant::now();
        let out = self.run(&["ring", config.to_str().unwrap(), "--max-degree", &max_degree.to_string(), "--report", report]);
        let elapsed = start.elapsed();
        if out.status.code() != Some(0) {
            return Err(format!("ring exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
        }
        Ok((read_json(&self.path(report)), elapsed))
    }
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn config_of(p: &Path) -> BranchConfig {
    serde_json::from_value(read_json(p)["config"].clone()).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

type Outcome = Result<String, String>;
type Criterion = fn(&Workspace) -> Outcome;

fn nonemptiness(ws: &Workspace) -> Outcome {
    let start = Instant::now();
    let mut ok = 0;
    for seed in 1..=10 {
        let Ok(p) = ws.sample(seed, &format!("c1_{seed}.json")) else { continue };
        let doc = read_json(&p);
        if doc["certificate"]["pass"] == json!(true) && doc["certificate"]["attempts"].as_u64().unwrap() <= 100 {
            ok += 1;
        }
    }
    let t = start.elapsed();
    ensure(ok >= 9, format!("{ok}/10 seeds certified"))?;
    ensure(t < Duration::from_secs(60), format!("took {t:?}"))?;
    Ok(format!("{ok}/10 seeds certified in {:.1} s", t.as_secs_f64()))
}

fn dimension_golden_set(ws: &Workspace) -> Outcome {
    let start = Instant::now();
    let slots = |m| slot_table(m).iter().map(|t| t.2).collect::<Vec<_>>();
    let got = (dim_r(1), dim_r(2), dim_r(3), dim_a(3), slots(2), slots(3));
    let t = start.elapsed();
    ensure(got == (6, 31, 79, 56, vec![20, 4, 4, 3], vec![24, 24, 25, 6]), format!("{got:?}"))?;
    ensure(t < Duration::from_secs(1), format!("took {t:?}"))?;
    let p = ws.sample(1, "c2.json")?;
    let (report, _) = ws.ring(&p, 3, "c2_ring.json")?;
    ensure(report["dims"]["R3"]["total"] == json!(79), "ring report disagrees on dim R3")?;
    Ok(format!("R1..R3 = 6/31/79, A3 = 56, slots {:?} {:?}", got.4, got.5))
}

fn sampled_rings(ws: &Workspace, max_degree: usize) -> Result<Vec<Value>, String> {
    [21, 22, 23]
        .iter()
        .map(|&seed| {
            let p = ws.sample(seed, &format!("r{seed}.json"))?;
            ws.ring(&p, max_degree, &format!("r{seed}_ring{max_degree}.json")).map(|r| r.0)
        })
        .collect()
}

fn m2_structure(ws: &Workspace) -> Outcome {
    for r in sampled_rings(ws, 2)? {
        let m2 = &r["m2"];
        ensure(m2["rank"] == json!(20), format!("rank {}", m2["rank"]))?;
        ensure(m2["kernel_dim"] == json!(1), format!("kernel {}", m2["kernel_dim"]))?;
        ensure(m2["quadric"] == json!("x1*x4 - x2*x3"), format!("quadric {}", m2["quadric"]))?;
        ensure(
            m2["cokernel_by_slot"] == json!({"1": 11, "w1": 0, "w2": 0, "w3": 0}),
            format!("cokernel {}", m2["cokernel_by_slot"]),
        )?;
    }
    Ok("rank 20, kernel x1*x4 - x2*x3, cokernel 11 in the trivial slot, on 3 configs".into())
}

fn w_lemma(ws: &Workspace) -> Outcome {
    for r in sampled_rings(ws, 2)? {
        let w = &r["w_lemma"];
        ensure(
            w["rank_fraction_free"] == json!(9) && w["rank_transposed"] == json!(9),
            format!("{w}"),
        )?;
    }
    Ok("rank 9 by both elimination orders on 3 configs".into())
}

fn generators_and_relations(ws: &Workspace) -> Outcome {
    let p = ws.sample(1, "c5.json")?;
    let (r, t) = ws.ring(&p, 6, "c5_ring.json")?;
    let n_gens = r["generators"].as_array().map(|g| g.len());
    ensure(n_gens == Some(11), format!("{n_gens:?} generators"))?;
    ensure(r["relations_deg3"]["rank"] == json!(79), "degree-3 map not surjective")?;
    ensure(r["relations_deg3"]["kernel_dim"] == json!(43), format!("relations {}", r["relations_deg3"]))?;
    ensure(r["generation"]["pass"] == json!(true), "generation check failed")?;
    ensure(r["generation"]["degrees"].as_array().unwrap().len() == 5, "degrees 2..6 not all checked")?;
    ensure(t < Duration::from_secs(300), format!("took {t:?}"))?;
    Ok(format!("11 generators, 43 relations, generation through m = 6 in {:.1} s", t.as_secs_f64()))
}

fn hartshorne_rao(ws: &Workspace) -> Outcome {
    let p = ws.sample(1, "c6.json")?;
    let (r, _) = ws.ring(&p, 7, "c6_ring.json")?;
    let rows = r["hr_bounds"].as_array().unwrap();
    let forced: Vec<u64> = rows.iter().filter(|x| x["forced"] == json!(true)).map(|x| x["m"].as_u64().unwrap()).collect();
    let values: Vec<i64> = rows[2..=6].iter().map(|x| x["h1_lower"].as_i64().unwrap()).collect();
    ensure(forced == [2, 3, 4, 5, 6], format!("forced {forced:?}"))?;
    ensure(values == [11, 29, 46, 51, 31], format!("values {values:?}"))?;
    ensure(rows[7]["forced"] == json!(false), "m = 7 forced")?;
    Ok("forced exactly for m = 2..6 with 11, 29, 46, 51, 31".into())
}

fn resultant_oracle(ws: &Workspace) -> Outcome {
    let mut pairs = 0;
    for b in 0..=4i64 {
        let mut rng = ChaCha8Rng::seed_from_u64(500 + b as u64);
        for _ in 0..25 {
            let d = BiDegree::new(2, b);
            let (p, q): (QBiPoly, QBiPoly) = (random_bipoly(d, 10, &mut rng), random_bipoly(d, 10, &mut rng));
            let closed = closed_form_delta(&decompose_quadratic(&p).unwrap(), &decompose_quadratic(&q).unwrap()).unwrap();
            ensure(closed == sylvester_resultant_u(&p, &q).unwrap(), format!("mismatch at v-degree {b}"))?;
            pairs += 1;
        }
    }
    let mut configs = 0;
    for seed in 1..=10 {
        let Ok(p) = ws.sample(seed, &format!("c7_{seed}.json")) else { continue };
        let c = config_of(&p);
        ensure(
            compose_delta_psi(&c).unwrap() == sylvester_resultant_u(&c.delta1, &c.delta2).unwrap(),
            format!("composed eliminant differs on seed {seed}"),
        )?;
        configs += 1;
    }
    Ok(format!("{pairs} quadratic pairs and {configs} sampled configs agree"))
}

fn numerology(ws: &Workspace) -> Outcome {
    let out = ws.run(&["numerology"]);
    ensure(out.status.code() == Some(0), "numerology failed")?;
    let text = String::from_utf8(out.stdout).unwrap();
    for needle in [
        "K2=24",
        "chi=7",
        "castelnuovo_lower=11",
        "bmy_upper=63",
        "family_dim=31",
        "moduli_dim=25",
        "expected_moduli_dim=22",
        "severi=(8,6),(9,6),(12,5 excluded)",
    ] {
        ensure(text.lines().any(|l| l == needle), format!("missing {needle}"))?;
    }
    Ok("K2=24, chi=7, window [11, 63], dims 31/25/22, Severi (8,6),(9,6),(12,5)".into())
}

fn probes(ws: &Workspace) -> Outcome {
    let start = Instant::now();
    let p = ws.sample(1, "c9.json")?;
    let out = ws.run(&["probe", p.to_str().unwrap(), "--samples", "500", "--pairs", "1000", "--report", "c9_probe.json"]);
    ensure(out.status.code() == Some(0), format!("probe exited {:?}", out.status.code()))?;
    let r = read_json(&ws.path("c9_probe.json"));
    for probe in r["probes"].as_array().unwrap() {
        ensure(probe["failures"].as_array().unwrap().is_empty(), format!("{} has failures", probe["probe"]))?;
    }

    let equal_v = ws.write_config("equal_v.json", &fixtures::planted_equal_v(1).unwrap());
    let out = ws.run(&["verify", equal_v.to_str().unwrap()]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.code() == Some(3), "equal-v fixture not rejected by verify")?;
    ensure(stdout.lines().any(|l| l.starts_with("distinct_v") && l.ends_with("FAIL")), "distinct_v not the failing check")?;
    let probe = ws.run(&["probe", equal_v.to_str().unwrap(), "--samples", "100", "--pairs", "200"]);
    let equal_v_probe = probe.status.code() == Some(3);

    let common = ws.write_config("d3_common.json", &fixtures::d3_with_common_factor(1).unwrap());
    let verify = ws.run(&["verify", common.to_str().unwrap()]);
    let probe = ws.run(&["probe", common.to_str().unwrap(), "--samples", "100", "--pairs", "200"]);
    ensure(
        verify.status.code() == Some(3) || probe.status.code() == Some(3),
        "common-factor fixture not caught",
    )?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(120), format!("took {t:?}"))?;
    Ok(format!(
        "zero failures on a certified config; fixtures caught (equal-v probe {}, common factor verify {:?} probe {:?}) in {:.1} s",
        if equal_v_probe { "exit 3" } else { "clean" },
        verify.status.code(),
        probe.status.code(),
        t.as_secs_f64()
    ))
}

fn determinism(ws: &Workspace) -> Outcome {
    let mut snapshots = Vec::new();
    for _ in 0..2 {
        ws.sample(4, "det.json")?;
        let cfg = std::fs::read(ws.path("det.json")).unwrap();
        ws.ring(&ws.path("det.json"), 4, "det_ring.json")?;
        let ring = std::fs::read(ws.path("det_ring.json")).unwrap();
        snapshots.push((cfg, ring));
    }
    ensure(snapshots[0].0 == snapshots[1].0, "sample output differs")?;
    ensure(snapshots[0].1 == snapshots[1].1, "ring output differs")?;
    Ok("sample and ring reruns are byte-identical".into())
}

#[test]
fn acceptance_criteria() {
    let ws = Workspace::new();
    let criteria: [(&str, Criterion); 10] = [
        ("nonemptiness", nonemptiness),
        ("dimension golden set", dimension_golden_set),
        ("m2 structure", m2_structure),
        ("W lemma", w_lemma),
        ("generators and relations", generators_and_relations),
        ("Hartshorne-Rao pattern", hartshorne_rao),
        ("resultant oracle", resultant_oracle),
        ("numerology", numerology),
        ("cover probes", probes),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(|| f(&ws))).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                println!("FAIL {:>2} {name}: {detail}", i + 1);
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
