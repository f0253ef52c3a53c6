use canonical24::branch::{certify, check_pair_transversal, compose_delta_psi, draw_config, fixtures};
use canonical24::elim::{is_squarefree, sylvester_resultant_u};

#[test]
fn passing_certificates_have_the_expected_eliminants() {
    let mut passed = 0;
    for seed in 0..15 {
        let c = draw_config(seed, 10, 0).unwrap();
        let cert = certify(&c).unwrap();
        if !cert.pass {
            continue;
        }
        passed += 1;
        assert_eq!((cert.res12_degree, cert.res13_degree, cert.res23_degree), (12, 14, 14));
        assert!(is_squarefree(&cert.res12).unwrap());
        assert!(cert.check("triple_empty").unwrap().pass);
        assert!(cert.check("d3_graph").unwrap().pass);
    }
    assert!(passed > 0);
}

#[test]
fn distinct_v_implies_transversal_12() {
    for seed in 0..40 {
        let c = draw_config(seed, 4, 0).unwrap();
        let cert = certify(&c).unwrap();
        if cert.check("distinct_v_on_D1capD2").unwrap().pass {
            assert!(check_pair_transversal(&c.delta1, &c.delta2).unwrap().transversal, "seed {seed}");
        }
        assert_eq!(compose_delta_psi(&c).unwrap(), sylvester_resultant_u(&c.delta1, &c.delta2).unwrap());
    }
}

#[test]
fn most_random_configurations_pass() {
    let passed = (0..200u64)
        .filter(|&seed| certify(&draw_config(seed, 10, 0).unwrap()).unwrap().pass)
        .count();
    println!("acceptance rate {passed}/200");
    assert!(passed > 100);
}

#[test]
fn planted_violations_fail_the_intended_check() {
    let c = fixtures::planted_equal_v(1).unwrap();
    assert_eq!(certify(&c).unwrap().failed(), ["distinct_v_on_D1capD2"]);
    let c = fixtures::planted_triple_point(1).unwrap();
    assert!(certify(&c).unwrap().failed().contains(&"triple_empty"));
    let c = fixtures::d3_with_common_factor(1).unwrap();
    assert!(certify(&c).unwrap().failed().contains(&"d3_graph"));
}
