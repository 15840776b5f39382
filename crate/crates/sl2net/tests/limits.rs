use sl2net::limits::{limit_check, standard_edges, DEFAULT_LIMIT_TOL};
use sl2net::specfun::TruncationPolicy;

#[test]
fn every_standard_edge_converges() {
    let pol = TruncationPolicy::default();
    let mut failed = Vec::new();
    for edge in standard_edges() {
        let rep = limit_check(&edge, edge.eps, DEFAULT_LIMIT_TOL, &pol).unwrap();
        println!("{} {:?} order={:.2} ext={:.2e} {}", rep.edge, rep.samples, rep.estimated_order, rep.extrapolated, rep.pass);
        if !rep.pass {
            failed.push(rep.edge);
        }
    }
    assert!(failed.is_empty(), "{failed:?}");
}
