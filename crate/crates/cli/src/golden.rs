//! Reference values every certified configuration must reproduce.

use serde::Serialize;
use serde_json::{json, Value};

/// One compared quantity.
#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub key: String,
    pub expected: Value,
    pub computed: Value,
}

/// The reference table, restricted to keys that exist for `max_degree`.
pub fn table(max_degree: usize) -> Vec<(String, Value)> {
    let mut t: Vec<(String, Value)> = vec![
        ("dims.R1".into(), json!(6)),
        ("dims.R2".into(), json!(31)),
        ("dims.R3".into(), json!(79)),
        ("dims.A3".into(), json!(56)),
        ("dims.slots_m2".into(), json!([20, 4, 4, 3])),
        ("dims.slots_m3".into(), json!([24, 24, 25, 6])),
        ("m2.rank".into(), json!(20)),
        ("m2.kernel_dim".into(), json!(1)),
        ("m2.quadric".into(), json!("x1*x4 - x2*x3")),
        ("m2.cokernel_by_slot".into(), json!({"1": 11, "w1": 0, "w2": 0, "w3": 0})),
        ("w_lemma.rank".into(), json!(9)),
        ("generators".into(), json!(11)),
        ("relations_deg3.kernel_dim".into(), json!(43)),
    ];
    let h1 = [None, None, Some(11), Some(29), Some(46), Some(51), Some(31)];
    for m in 0..=max_degree {
        let forced = (2..=6).contains(&m);
        t.push((format!("hr_bounds.m{m}.forced"), json!(forced)));
        if let Some(Some(v)) = h1.get(m) {
            t.push((format!("hr_bounds.m{m}.h1_lower"), json!(v)));
        }
    }
    for m in 2..=max_degree {
        t.push((format!("generation.m{m}"), json!(true)));
    }
    t
}

/// Compare computed values against the table; missing keys count as
/// mismatches.
pub fn compare(max_degree: usize, lookup: impl Fn(&str) -> Option<Value>) -> Vec<Mismatch> {
    table(max_degree)
        .into_iter()
        .filter_map(|(key, expected)| {
            let computed = lookup(&key).unwrap_or(Value::Null);
            (computed != expected).then_some(Mismatch {
                key,
                expected,
                computed,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_grows_with_degree() {
        assert!(table(6).len() > table(3).len());
        assert!(table(7).iter().any(|(k, v)| k == "hr_bounds.m7.forced" && v == &json!(false)));
    }

    #[test]
    fn compare_reports_only_differences() {
        let all = compare(2, |_| None);
        assert_eq!(all.len(), table(2).len());
        let t = table(2);
        let none = compare(2, |k| t.iter().find(|(key, _)| key == k).map(|(_, v)| v.clone()));
        assert!(none.is_empty());
    }
}
