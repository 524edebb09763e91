use serde::Serialize;

use super::{
    are_critically_separated, critical_values, free_semigroup_finite_check, genus_constants, is_power_like,
    left_compositional_factor, CriticalData, FreenessReport, GenusConstants, HypothesisError, LeftFactor,
    PowerLikeVerdict, DEFAULT_FREENESS_BUDGET,
};
use crate::algebra::ProjectivePointQ;
use crate::dynamics::{
    moderately_preperiodic_search, wandering_certificate, PreperiodicWitness, SemigroupSystem, WanderingCertificate,
    DEFAULT_NODE_BUDGET,
};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub depth: usize,
    pub node_budget: usize,
    pub freeness_budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { depth: 3, node_budget: DEFAULT_NODE_BUDGET, freeness_budget: DEFAULT_FREENESS_BUDGET }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Ratmaps,
    Poly,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapVerdict {
    pub index: usize,
    pub map: String,
    pub degree: usize,
    pub polynomial: bool,
    pub critically_simple: bool,
    pub critical: CriticalData,
    /// Present for polynomial maps only.
    pub power_like: Option<PowerLikeVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub i: usize,
    pub j: usize,
    pub critically_separated: bool,
    /// Both degrees at least 4, both critically simple, critically separated.
    pub ratmaps_hypotheses: bool,
    /// `f_i = f_j o g`.
    pub left_factor_ij: Option<LeftFactor>,
    /// `f_j = f_i o g`.
    pub left_factor_ji: Option<LeftFactor>,
    /// Both polynomial, neither power-like, no left factor either way; absent
    /// unless both maps are polynomials.
    pub poly_hypotheses: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificates {
    pub depth: usize,
    pub wandering: Option<WanderingCertificate>,
    pub freeness: Option<FreenessReport>,
    pub preperiodic: Option<PreperiodicWitness>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub route: Route,
    pub route_pair: Option<[usize; 2]>,
    pub genus: Option<GenusConstants>,
    pub maps: Vec<MapVerdict>,
    pub pairs: Vec<PairVerdict>,
    pub certificates: Certificates,
}

/// Evaluates the map and pair hypotheses of both theorem routes, plus
/// depth-limited certificates for the base point.
pub fn verify(
    system: &SemigroupSystem,
    point: &ProjectivePointQ,
    options: &VerifyOptions,
) -> Result<VerifyReport, HypothesisError> {
    let mut maps = Vec::with_capacity(system.rank());
    for (k, f) in system.maps().iter().enumerate() {
        let critical = critical_values(f)?;
        let critically_simple = critical.chart_poly.is_squarefree()?;
        let poly = f.as_polynomial();
        maps.push(MapVerdict {
            index: k + 1,
            map: f.canonical(),
            degree: f.degree(),
            polynomial: poly.is_some(),
            critically_simple,
            critical,
            power_like: poly.as_ref().map(is_power_like),
        });
    }
    let mut pairs = Vec::new();
    let mut route = (Route::None, None);
    for j in 1..system.rank() {
        for i in 0..j {
            let (f, g) = (&system.maps()[i], &system.maps()[j]);
            let critically_separated = are_critically_separated(f, g)?;
            let ratmaps_hypotheses = f.degree() >= 4
                && g.degree() >= 4
                && maps[i].critically_simple
                && maps[j].critically_simple
                && critically_separated;
            let (mut left_factor_ij, mut left_factor_ji, mut poly_hypotheses) = (None, None, None);
            if let (Some(p), Some(q)) = (f.as_polynomial(), g.as_polynomial()) {
                left_factor_ij = left_compositional_factor(&p, &q);
                left_factor_ji = left_compositional_factor(&q, &p);
                let power_like = |m: &MapVerdict| m.power_like.as_ref().is_some_and(|v| v.is_power_like);
                poly_hypotheses = Some(
                    !power_like(&maps[i])
                        && !power_like(&maps[j])
                        && left_factor_ij.is_none()
                        && left_factor_ji.is_none(),
                );
            }
            if ratmaps_hypotheses && route.0 != Route::Ratmaps {
                route = (Route::Ratmaps, Some([i + 1, j + 1]));
            } else if poly_hypotheses == Some(true) && route.0 == Route::None {
                route = (Route::Poly, Some([i + 1, j + 1]));
            }
            pairs.push(PairVerdict {
                i: i + 1,
                j: j + 1,
                critically_separated,
                ratmaps_hypotheses,
                left_factor_ij,
                left_factor_ji,
                poly_hypotheses,
            });
        }
    }
    let genus = route.1.map(|[i, j]| genus_constants(maps[i - 1].degree, maps[j - 1].degree));
    Ok(VerifyReport {
        route: route.0,
        route_pair: route.1,
        genus,
        maps,
        pairs,
        certificates: certificates(system, point, options),
    })
}

fn certificates(system: &SemigroupSystem, point: &ProjectivePointQ, options: &VerifyOptions) -> Certificates {
    let depth = options.depth;
    let mut notes = Vec::new();
    let wandering = wandering_certificate(system, point, depth, options.node_budget)
        .map_err(|e| notes.push(format!("wandering check skipped: {e}")))
        .ok();
    let freeness = free_semigroup_finite_check(system, depth, options.freeness_budget)
        .map_err(|e| notes.push(format!("freeness check skipped: {e}")))
        .ok();
    let preperiodic = match moderately_preperiodic_search(system, point, depth, options.node_budget) {
        Ok(w) => w,
        Err(e) => {
            notes.push(format!("preperiodic search skipped: {e}"));
            None
        }
    };
    Certificates { depth, wandering, freeness, preperiodic, notes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::RationalMapQ;

    fn polys(maps: &[&[i64]]) -> SemigroupSystem {
        SemigroupSystem::new(maps.iter().map(|c| RationalMapQ::poly(c).unwrap()).collect()).unwrap()
    }

    #[test]
    fn quadratics_are_power_like() {
        let rep = verify(&polys(&[&[1, 0, 1], &[-1, 0, 1]]), &ProjectivePointQ::affine(0), &VerifyOptions::default())
            .unwrap();
        assert_eq!(rep.route, Route::None);
        assert!(rep.maps.iter().all(|m| m.power_like.as_ref().unwrap().is_power_like));
        assert_eq!(rep.pairs[0].poly_hypotheses, Some(false));
        assert!(rep.certificates.freeness.as_ref().unwrap().is_clean());
        assert!(!rep.certificates.wandering.as_ref().unwrap().is_clean());
    }

    #[test]
    fn quartic_polynomials_take_the_poly_route() {
        let rep = verify(&polys(&[&[0, 1, 0, 0, 1], &[0, 2, 0, 0, 1]]), &ProjectivePointQ::affine(1), &VerifyOptions::default())
            .unwrap();
        assert_eq!(rep.route, Route::Poly);
        assert_eq!(rep.route_pair, Some([1, 2]));
        assert_eq!(rep.genus.unwrap().pair(), (4, 9));
    }

    #[test]
    fn composite_blocks_the_poly_route() {
        let rep = verify(&polys(&[&[0, 0, 1], &[0, 0, 0, 0, 1]]), &ProjectivePointQ::affine(2), &VerifyOptions::default())
            .unwrap();
        assert_eq!(rep.route, Route::None);
        let lf = rep.pairs[0].left_factor_ji.as_ref().unwrap();
        assert_eq!(lf.rational.as_ref().unwrap().to_string(), "x^2");
    }

    #[test]
    fn sampled_pair_takes_the_ratmaps_route() {
        let s = crate::hypothesis::sample_good_family(&[4, 4], 500, 10, 3).unwrap();
        let system = SemigroupSystem::new(s.found.unwrap().rational_maps).unwrap();
        let rep = verify(&system, &ProjectivePointQ::affine(1), &VerifyOptions { depth: 2, ..Default::default() }).unwrap();
        assert_eq!(rep.route, Route::Ratmaps);
        assert!(rep.pairs[0].ratmaps_hypotheses);
        assert_eq!(rep.pairs[0].poly_hypotheses, None);
    }
}
