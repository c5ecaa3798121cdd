use serde::Serialize;

use super::{is_subset, support_of, Coordinate, LinearStratification, Subset};
use crate::error::{Error, Result};

/// One component of the beta-part of N(V_alpha): the base support I and the
/// beta-supports J containing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalPiece {
    pub base: Subset,
    pub fibers: Vec<Subset>,
}

/// A component N(V^[J]) of the normal bundle of (N(V_alpha))_beta inside
/// N(V_alpha). Its fiber is spanned by the coordinates outside J, and it
/// embeds into the J-component of N(V_beta).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DoubleNormalPiece {
    pub base: Subset,
    pub piece: Subset,
    pub normal: Subset,
    pub target: Subset,
}

impl LinearStratification {
    /// (N(V_alpha))_beta as a list over I in J_alpha of {J in J_beta : J contains I}.
    pub fn normal_stratum(&self, alpha: usize, beta: usize) -> Result<Vec<NormalPiece>> {
        self.check_class(alpha)?;
        self.check_class(beta)?;
        if !self.le(alpha, beta) {
            return Err(Error::Order(format!("class {beta} is not above class {alpha}")));
        }
        Ok(self
            .class(alpha)
            .iter()
            .map(|&i| NormalPiece {
                base: i,
                fibers: self.class(beta).iter().copied().filter(|&j| is_subset(i, j)).collect(),
            })
            .collect())
    }

    /// The normal bundle of (N(V_alpha))_beta in N(V_alpha), with each piece
    /// tagged by its target component in N(V_beta). Requires alpha < beta.
    pub fn double_normal(&self, alpha: usize, beta: usize) -> Result<Vec<DoubleNormalPiece>> {
        self.check_class(alpha)?;
        self.check_class(beta)?;
        if !self.lt(alpha, beta) {
            return Err(Error::Order(format!("class {alpha} is not strictly below class {beta}")));
        }
        let full: Subset = (1 << self.m()) - 1;
        let mut out = Vec::new();
        for piece in self.normal_stratum(alpha, beta)? {
            for &j in &piece.fibers {
                out.push(DoubleNormalPiece { base: piece.base, piece: j, normal: full & !j, target: j });
            }
        }
        out.sort();
        Ok(out)
    }

    /// The canonical inclusion of a point of the (I, J) normal piece into V.
    /// Returns the point and its class, which is beta.
    pub fn tau_embed<T: Coordinate + Clone>(
        &self,
        alpha: usize,
        beta: usize,
        base: Subset,
        piece: Subset,
        point: &[T],
    ) -> Result<(Vec<T>, usize)> {
        self.check_class(alpha)?;
        self.check_class(beta)?;
        if !self.le(alpha, beta) {
            return Err(Error::Order(format!("class {beta} is not above class {alpha}")));
        }
        if point.len() != self.m() {
            return Err(Error::Dimension(format!("point has {} coordinates, expected {}", point.len(), self.m())));
        }
        if base as usize >= self.class_of.len() || self.class_of(base) != alpha {
            return Err(Error::Support(format!("base {} is not in class {alpha}", super::format_subset(base))));
        }
        if piece as usize >= self.class_of.len() || self.class_of(piece) != beta || !is_subset(base, piece) {
            return Err(Error::Support(format!(
                "{} is not a class-{beta} support containing {}",
                super::format_subset(piece),
                super::format_subset(base)
            )));
        }
        let s = support_of(point);
        if s != piece {
            return Err(Error::Support(format!(
                "point has support {}, expected {}",
                super::format_subset(s),
                super::format_subset(piece)
            )));
        }
        Ok((point.to_vec(), beta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qi, Q};
    use crate::linear_strata::{all_stratifications, Field};

    fn chain2() -> LinearStratification {
        LinearStratification::new(2, Field::Real, vec![vec![0], vec![0b01, 0b10], vec![0b11]]).unwrap()
    }

    #[test]
    fn normal_stratum_examples() {
        let s = chain2();
        let pieces = s.normal_stratum(1, 2).unwrap();
        assert_eq!(
            pieces,
            vec![NormalPiece { base: 0b01, fibers: vec![0b11] }, NormalPiece { base: 0b10, fibers: vec![0b11] }]
        );
        for a in 0..3 {
            for p in s.normal_stratum(a, a).unwrap() {
                assert_eq!(p.fibers, vec![p.base]);
            }
        }
        assert_eq!(s.normal_stratum(0, 2).unwrap(), vec![NormalPiece { base: 0, fibers: vec![0b11] }]);
        assert!(matches!(s.normal_stratum(2, 1), Err(Error::Order(_))));
    }

    #[test]
    fn double_normal_examples() {
        let s = chain2();
        let d = s.double_normal(0, 1).unwrap();
        assert_eq!(d.iter().map(|p| p.piece).collect::<Vec<_>>(), vec![0b01, 0b10]);
        assert!(s.double_normal(1, 1).is_err());

        let c = LinearStratification::by_cardinality(3, Field::Real);
        let d = c.double_normal(1, 2).unwrap();
        assert_eq!(d.len(), 6);
        assert!(d.iter().all(|p| is_subset(p.base, p.piece) && p.base != p.piece));
    }

    #[test]
    fn tau_examples() {
        let s = chain2();
        assert_eq!(s.tau_embed(0, 1, 0, 0b01, &[qi(1), qi(0)]).unwrap(), (vec![qi(1), qi(0)], 1));
        assert_eq!(s.tau_embed(1, 2, 0b01, 0b11, &[qi(2), qi(3)]).unwrap().1, 2);
        assert!(matches!(s.tau_embed(1, 2, 0b01, 0b11, &[qi(2), qi(0)]), Err(Error::Support(_))));
    }

    #[test]
    fn normal_pieces_disjoint_and_tau_lands_in_beta() {
        for s in all_stratifications(3, Field::Real) {
            for a in 0..s.num_classes() {
                for b in s.upper_set(a) {
                    for p in s.normal_stratum(a, b).unwrap() {
                        let mut f = p.fibers.clone();
                        f.dedup();
                        assert_eq!(f.len(), p.fibers.len());
                        for &j in &p.fibers {
                            let point: Vec<Q> =
                                (0..3).map(|k| if j >> k & 1 == 1 { q(k as i64 + 1, 2) } else { qi(0) }).collect();
                            let (img, class) = s.tau_embed(a, b, p.base, j, &point).unwrap();
                            assert_eq!(s.stratum_of(&img).unwrap().0, class);
                        }
                    }
                }
            }
        }
    }
}
