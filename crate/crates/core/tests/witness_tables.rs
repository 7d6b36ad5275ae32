use levelh::betti::{first_module_degrees, functional_equation_check, koszul_betti, socle_from_table};
use levelh::ideal::GradedIdeal;
use levelh::invsys::{hvector_of_module, socle_vector, DEFAULT_RETRIES};
use levelh::level2::{decide, enumerate_rrr2, Verdict};

#[test]
fn level_witness_tables_round_trip() {
    for h in enumerate_rrr2(3, 6, 0, DEFAULT_RETRIES).unwrap() {
        let c = decide(&h, 0, DEFAULT_RETRIES).unwrap();
        assert_eq!(c.verdict, Verdict::Level, "({h})");
        let m = c.witness.unwrap().module;
        let e = h.socle_degree();
        let t = koszul_betti(&GradedIdeal::from_module(&m, e + 1)).unwrap();
        assert_eq!(hvector_of_module(&m), h);
        assert!(functional_equation_check(&h, &t).holds, "({h})");
        assert_eq!(socle_from_table(&t).unwrap(), socle_vector(&m), "({h})");
        let allowed = first_module_degrees(&h).unwrap();
        assert!(allowed.contains(&t.degrees(1)), "({h}): {:?} not in {allowed:?}", t.degrees(1));
        // β2,e+1 - β1,e+1 = 3 - h_{e-2}, which is -1 exactly when h_{e-2} = 4.
        let diff = t.get(2, e + 1) as i64 - t.get(1, e + 1) as i64;
        assert_eq!(diff, 3 - h.get(e - 2) as i64, "({h})");
    }
}
