//! The full invariant suite for one game: parity and index split, the edge
//! property, Lemke-Howson endpoints, agreement with support enumeration, and
//! soundness of the stable-set and facet-stable-set bounds.

use serde::Serialize;

use crate::bounds::{facet_stable_set_bound, stable_set_bound};
use crate::equilibrium::{
    edge_property_violations, enumerate_equilibria, lemke_howson, mixed_strategies, verify_parity, Equilibrium,
    ParityReport,
};
use crate::error::Result;
use crate::exact::Scalar;
use crate::game::{BestResponsePair, BimatrixGame};
use crate::oracle::support_enumeration;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LhViolation {
    pub missing: usize,
    pub start: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetViolation {
    pub polytope: char,
    pub label: usize,
    pub equilibria: usize,
    pub bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GameVerification {
    pub equilibria: usize,
    pub nash: usize,
    pub parity: ParityReport,
    pub edge_violations: usize,
    pub lh_paths: usize,
    pub lh_violations: Vec<LhViolation>,
    pub oracle_nash: usize,
    pub oracle_match: bool,
    pub p_vertices: usize,
    pub q_vertices: usize,
    pub p_bound: usize,
    pub q_bound: usize,
    pub facet_checks: usize,
    pub facet_violations: Vec<FacetViolation>,
}

impl GameVerification {
    pub fn bounds_hold(&self) -> bool {
        self.equilibria <= self.p_bound && self.equilibria <= self.q_bound && self.facet_violations.is_empty()
    }

    pub fn passes(&self) -> bool {
        self.parity.passes
            && self.edge_violations == 0
            && self.lh_violations.is_empty()
            && self.oracle_match
            && self.bounds_hold()
    }
}

type Profile = (Vec<Scalar>, Vec<Scalar>);

/// Rescaled non-artificial equilibria in a canonical order.
pub fn nash_profiles(pair: &BestResponsePair, eqs: &[Equilibrium]) -> Vec<Profile> {
    let mut out: Vec<Profile> = eqs.iter().filter(|e| !e.artificial).filter_map(|e| mixed_strategies(pair, e)).collect();
    out.sort();
    out
}

/// Lemke-Howson from every equilibrium and every missing label: each path
/// must end at a different equilibrium of opposite index, and paths from the
/// artificial equilibrium must end at index `+1`.
pub fn check_lemke_howson(pair: &BestResponsePair, eqs: &[Equilibrium]) -> Result<(usize, Vec<LhViolation>)> {
    let d = pair.m() + pair.n();
    let mut paths = 0;
    let mut bad = Vec::new();
    for (k, start) in eqs.iter().enumerate() {
        for h in 1..=d {
            let path = lemke_howson(pair, start, h)?;
            paths += 1;
            let end = path.end;
            let reason = if !eqs.contains(&end) {
                Some("endpoint is not an enumerated equilibrium".to_string())
            } else if end == *start {
                Some("path returns to its start".to_string())
            } else if end.index == start.index {
                Some(format!("endpoints share index {:+}", end.index))
            } else if start.artificial && end.index != 1 {
                Some("path from the artificial equilibrium ends at index -1".to_string())
            } else {
                None
            };
            if let Some(reason) = reason {
                bad.push(LhViolation { missing: h, start: k, reason });
            }
        }
    }
    Ok((paths, bad))
}

/// For each facet of `P` and `Q`, the equilibrium vertices on it never exceed
/// its facet-stable-set bound, and neither index class exceeds half of it.
/// Requires at least two strategies on the side whose polytope is inspected.
pub fn check_facet_bounds(pair: &BestResponsePair, eqs: &[Equilibrium]) -> Result<(usize, Vec<FacetViolation>)> {
    let d = pair.m() + pair.n();
    let mut checks = 0;
    let mut bad = Vec::new();
    let sides = [('P', pair.m(), pair.p(), true), ('Q', pair.n(), pair.q(), false)];
    for (name, strategies, vs, is_p) in sides {
        if strategies < 2 {
            continue;
        }
        for label in 1..=d {
            let ineq = if is_p { pair.p_inequality(label) } else { pair.q_inequality(label) };
            let facet = vs.facet_vertex_set(ineq);
            if facet.is_empty() {
                continue;
            }
            let bound = facet_stable_set_bound(&vs.graph, &facet)?.bound;
            let on_facet: Vec<&Equilibrium> =
                eqs.iter().filter(|e| facet.binary_search(if is_p { &e.x } else { &e.y }).is_ok()).collect();
            let positive = on_facet.iter().filter(|e| e.index == 1).count();
            let negative = on_facet.len() - positive;
            checks += 1;
            if on_facet.len() > bound || 2 * positive > bound || 2 * negative > bound {
                bad.push(FacetViolation { polytope: name, label, equilibria: on_facet.len(), bound });
            }
        }
    }
    Ok((checks, bad))
}

/// Runs every check on the positivized game.
pub fn verify_game(game: &BimatrixGame) -> Result<GameVerification> {
    let game = game.positivize();
    let pair = game.best_response_pair()?;
    let eqs = enumerate_equilibria(&pair)?;
    let parity = verify_parity(&eqs);
    let edge_violations = edge_property_violations(&pair, &eqs).len();
    let (lh_paths, lh_violations) = check_lemke_howson(&pair, &eqs)?;

    let ours = nash_profiles(&pair, &eqs);
    let mut oracle: Vec<Profile> = support_enumeration(&game)?.into_iter().map(|p| (p.x, p.y)).collect();
    oracle.sort();

    let p_bound = stable_set_bound(&pair.p().graph)?.bound;
    let q_bound = stable_set_bound(&pair.q().graph)?.bound;
    let (facet_checks, facet_violations) = check_facet_bounds(&pair, &eqs)?;

    Ok(GameVerification {
        equilibria: eqs.len(),
        nash: ours.len(),
        parity,
        edge_violations,
        lh_paths,
        lh_violations,
        oracle_nash: oracle.len(),
        oracle_match: ours == oracle,
        p_vertices: pair.p().vertices.len(),
        q_vertices: pair.q().vertices.len(),
        p_bound,
        q_bound,
        facet_checks,
        facet_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordination_games_pass() {
        for n in 1..=4 {
            let v = verify_game(&BimatrixGame::coordination(n).unwrap()).unwrap();
            assert!(v.passes(), "{v:?}");
            assert_eq!(v.nash, (1 << n) - 1);
            assert_eq!(v.p_bound, 1 << n);
        }
    }

    #[test]
    fn random_games_pass() {
        for seed in 0..10 {
            let v = verify_game(&BimatrixGame::random_nondegenerate(3, 4, seed).unwrap()).unwrap();
            assert!(v.passes(), "{v:?}");
            assert_eq!(v.lh_paths, v.equilibria * 7);
        }
    }
}
