//! Barcodes, boundary depth, total bar length, persistence ranks and
//! spectral invariants.
//!
//! Finite bar lengths are the valuations of the invariant factors of the
//! normalized differential over the valuation ring.  When the differential
//! never raises action (`d_qp != 0` implies `l(q) <= l(p)`), bar endpoints
//! come from column reduction over the Novikov field in action order.

use std::cmp::Ordering;

use serde_json::{json, Value};

use crate::coeff::{Field, Rat};
use crate::novikov::linalg::{self, Matrix};
use crate::novikov::NovikovSeries;

use super::{FilteredComplex, FilteredError};

/// Reduced barcode: finite bar lengths (descending) and the number of
/// infinite bars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Barcode {
    pub finite: Vec<Rat>,
    pub infinite: usize,
}

impl Barcode {
    pub fn new(mut finite: Vec<Rat>, infinite: usize) -> Self {
        finite.sort_by(|a, b| b.cmp(a));
        Barcode { finite, infinite }
    }

    /// Longest finite bar, 0 when there is none.
    pub fn boundary_depth(&self) -> Rat {
        self.finite.first().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_bar_length(&self) -> Rat {
        self.finite.iter().sum()
    }

    /// `2 * finite + infinite`.
    pub fn endpoint_count(&self) -> usize {
        2 * self.finite.len() + self.infinite
    }

    pub fn to_json(&self) -> Value {
        json!({
            "finite_bars": self.finite.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "infinite_bars": self.infinite,
            "boundary_depth": self.boundary_depth().to_string(),
            "total_bar_length": self.total_bar_length().to_string(),
        })
    }
}

/// A bar `[birth, death)` with the generators realizing its endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarInterval {
    pub birth: Rat,
    /// `None` for an infinite bar.
    pub death: Option<Rat>,
    pub birth_generator: usize,
    pub death_generator: Option<usize>,
}

impl BarInterval {
    pub fn length(&self) -> Option<Rat> {
        self.death.as_ref().map(|d| d - &self.birth)
    }

    /// `birth <= s < death`.
    pub fn alive_at(&self, s: &Rat) -> bool {
        &self.birth <= s && self.death.as_ref().map_or(true, |d| s < d)
    }
}

/// Number of intervals alive at `s`.
pub fn interval_rank(intervals: &[BarInterval], s: &Rat) -> usize {
    intervals.iter().filter(|b| b.alive_at(s)).count()
}

/// `rho` of a homology class: a level, or `-infinity` for the zero class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpectralValue {
    Finite(Rat),
    NegInfinity,
}

impl SpectralValue {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            SpectralValue::Finite(r) => Some(r),
            SpectralValue::NegInfinity => None,
        }
    }
}

impl std::fmt::Display for SpectralValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpectralValue::Finite(r) => write!(f, "{r}"),
            SpectralValue::NegInfinity => f.write_str("-inf"),
        }
    }
}

/// `rho` together with a homologous chain attaining it.
#[derive(Clone, Debug)]
pub struct SpectralResult<F: Field> {
    pub value: SpectralValue,
    pub representative: Vec<NovikovSeries<F>>,
}

impl<F: Field> FilteredComplex<F> {
    pub fn barcode(&self) -> Result<Barcode, FilteredError> {
        let vals = linalg::invariant_valuations(&self.field, &self.normalized_matrix())?;
        let infinite = self.len() - 2 * vals.len();
        Ok(Barcode::new(vals, infinite))
    }

    pub fn boundary_depth(&self) -> Result<Rat, FilteredError> {
        Ok(self.barcode()?.boundary_depth())
    }

    pub fn total_bar_length(&self) -> Result<Rat, FilteredError> {
        Ok(self.barcode()?.total_bar_length())
    }

    /// True when every nonzero `d_qp` has `l(q) <= l(p)`, so that the span
    /// of generators of action at most `s` is a subcomplex for every `s`.
    pub fn is_action_monotone(&self) -> bool {
        let n = self.len();
        (0..n).all(|p| (0..n).all(|q| self.d[q][p].has_no_terms() || self.gens[q].action <= self.gens[p].action))
    }

    /// Generators in increasing action, ties broken by index.
    fn action_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| match self.gens[a].action.cmp(&self.gens[b].action) {
            Ordering::Equal => a.cmp(&b),
            o => o,
        });
        order
    }

    /// Bar endpoints by column reduction over the Novikov field; requires
    /// an action-monotone differential.
    pub fn intervals(&self) -> Result<Vec<BarInterval>, FilteredError> {
        if !self.is_action_monotone() {
            return Err(FilteredError::NotActionMonotone);
        }
        let k = &self.field;
        let order = self.action_order();
        let n = order.len();
        // columns and rows indexed by position in `order`
        let mut cols: Vec<Vec<NovikovSeries<F>>> =
            order.iter().map(|&p| order.iter().map(|&q| self.d[q][p].clone()).collect()).collect();
        let low = |c: &[NovikovSeries<F>]| (0..n).rev().find(|&r| !c[r].has_no_terms());
        let mut owner: Vec<Option<usize>> = vec![None; n];
        let mut lows: Vec<Option<usize>> = vec![None; n];
        for j in 0..n {
            while let Some(r) = low(&cols[j]) {
                match owner[r] {
                    None => {
                        owner[r] = Some(j);
                        lows[j] = Some(r);
                        break;
                    }
                    Some(i) => {
                        // cols[j] <- a cols[j] - b cols[i], a = cols[i][r], b = cols[j][r]
                        let a = cols[i][r].clone();
                        let b = cols[j][r].clone();
                        let ci = cols[i].clone();
                        for (x, y) in cols[j].iter_mut().zip(&ci) {
                            *x = &(&a * &*x) - &(&b * y);
                        }
                        cols[j][r] = NovikovSeries::zero(k);
                    }
                }
            }
        }
        let mut out = Vec::new();
        for r in 0..n {
            let birth_generator = order[r];
            let birth = self.gens[birth_generator].action.clone();
            match owner[r] {
                Some(j) => out.push(BarInterval {
                    birth,
                    death: Some(self.gens[order[j]].action.clone()),
                    birth_generator,
                    death_generator: Some(order[j]),
                }),
                None if lows[r].is_none() => {
                    out.push(BarInterval { birth, death: None, birth_generator, death_generator: None })
                }
                None => {}
            }
        }
        Ok(out)
    }

    /// Rank of the homology of the span of generators with action `<= s`;
    /// requires an action-monotone differential.
    pub fn persistence_rank(&self, s: &Rat) -> Result<usize, FilteredError> {
        if !self.is_action_monotone() {
            return Err(FilteredError::NotActionMonotone);
        }
        let idx: Vec<usize> = (0..self.len()).filter(|&p| &self.gens[p].action <= s).collect();
        let sub: Matrix<F> = idx.iter().map(|&q| idx.iter().map(|&p| self.d[q][p].clone()).collect()).collect();
        let r = linalg::rank(&self.field, &sub)?;
        Ok(idx.len() - 2 * r)
    }

    /// `rho([chain])`: the least level of a homologous chain.
    pub fn spectral_invariant(&self, chain: &[NovikovSeries<F>]) -> Result<SpectralValue, FilteredError> {
        Ok(self.spectral_with_representative(chain)?.value)
    }

    /// `rho([chain])` and an exact homologous chain whose level equals it.
    pub fn spectral_with_representative(
        &self,
        chain: &[NovikovSeries<F>],
    ) -> Result<SpectralResult<F>, FilteredError> {
        let k = &self.field;
        let image = self.apply(chain)?;
        if image.iter().any(|x| !x.has_no_terms()) {
            return Err(FilteredError::NotClosed);
        }
        let n = self.len();
        // normalized coordinates a_p T^{-l(p)}
        let a_hat: Vec<NovikovSeries<F>> =
            chain.iter().zip(&self.gens).map(|(a, g)| a.shift(&-&g.action)).collect();
        let red = linalg::reduce_with_transform(k, &self.normalized_matrix())?;
        let y = linalg::mat_vec(k, &red.transform, &a_hat);
        let mut min_val: Option<Rat> = None;
        for i in red.zero_rows() {
            if let Some(v) = y[i].valuation()? {
                min_val = Some(match min_val {
                    None => v,
                    Some(m) => Rat::min(&m, &v),
                });
            }
        }
        let Some(mv) = min_val else {
            return Ok(SpectralResult { value: SpectralValue::NegInfinity, representative: vec![NovikovSeries::zero(k); n] });
        };
        let rho = -&mv;
        // back-substitution on the pivot rows, refining until the level is attained
        let mut margin = Rat::one();
        for _ in 0..8 {
            let target = &(&mv + &margin) + &Rat::one();
            let mut b = vec![NovikovSeries::zero(k); n];
            for (r, c, _) in red.pivots.iter().rev() {
                let mut acc = y[*r].clone();
                for (_, c2, _) in &red.pivots {
                    if c2 != c && !b[*c2].is_exact_zero() && !red.reduced[*r][*c2].is_exact_zero() {
                        acc = &acc + &(&red.reduced[*r][*c2] * &b[*c2]);
                    }
                }
                let piv = &red.reduced[*r][*c];
                let sol = &(-&acc) * &piv.invert(&(&target - &piv.leading().unwrap().0))?;
                b[*c] = sol.with_precision(&target).exact_part();
            }
            // beta_p = b_p T^{l(p)} in the original basis
            let beta: Vec<NovikovSeries<F>> = b.iter().zip(&self.gens).map(|(x, g)| x.shift(&g.action)).collect();
            let db = self.apply(&beta)?;
            let rep: Vec<NovikovSeries<F>> = chain.iter().zip(&db).map(|(a, x)| a + x).collect();
            if rep.iter().all(NovikovSeries::is_exact) && self.level(&rep)? == Some(rho.clone()) {
                return Ok(SpectralResult { value: SpectralValue::Finite(rho), representative: rep });
            }
            margin = &margin + &margin;
        }
        Err(FilteredError::Linalg(crate::novikov::LinalgError::PrecisionInsufficient))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::QField;
    use crate::filtered::{Generator, Mode};

    fn q(s: &str) -> NovikovSeries<QField> {
        NovikovSeries::parse(&QField, s).unwrap()
    }

    fn two_gen(g: &str, lx: Rat, ly: Rat) -> FilteredComplex<QField> {
        let gens = vec![Generator::new("x", 1, lx), Generator::new("y", 0, ly)];
        let mut d = linalg::zeros(&QField, 2, 2);
        d[1][0] = q(g);
        FilteredComplex::new(&QField, gens, d, Mode::Strict).unwrap()
    }

    #[test]
    fn zero_differential() {
        let gens = (0..3).map(|i| Generator::new(format!("g{i}"), i, Rat::from_int(i))).collect();
        let c = FilteredComplex::new(&QField, gens, linalg::zeros(&QField, 3, 3), Mode::Strict).unwrap();
        let b = c.barcode().unwrap();
        assert_eq!(b, Barcode::new(vec![], 3));
        assert_eq!(b.boundary_depth(), Rat::zero());
        assert_eq!(b.total_bar_length(), Rat::zero());
        assert_eq!(c.persistence_rank(&Rat::from_int(-1)).unwrap(), 0);
        assert_eq!(c.persistence_rank(&Rat::from_int(5)).unwrap(), 3);
        let x = vec![q("1"), q("0"), q("0")];
        assert_eq!(c.spectral_invariant(&x).unwrap(), SpectralValue::Finite(Rat::zero()));
    }

    #[test]
    fn single_bar() {
        // d x = T^(3/2) y: length 3/2 + l(x) - l(y)
        let c = two_gen("T^(3/2)", Rat::one(), Rat::zero());
        let b = c.barcode().unwrap();
        assert_eq!(b.finite, vec![Rat::new(5, 2)]);
        assert_eq!(b.infinite, 0);
        assert_eq!(c.boundary_depth().unwrap(), Rat::new(5, 2));
        let c = two_gen("3", Rat::one(), Rat::zero());
        let iv = c.intervals().unwrap();
        assert_eq!(iv.len(), 1);
        assert_eq!(iv[0].birth, Rat::zero());
        assert_eq!(iv[0].death, Some(Rat::one()));
        assert_eq!(c.persistence_rank(&Rat::new(1, 2)).unwrap(), 1);
        assert_eq!(c.persistence_rank(&Rat::one()).unwrap(), 0);
        // y is exact
        let y = vec![q("0"), q("1")];
        assert_eq!(c.spectral_invariant(&y).unwrap(), SpectralValue::NegInfinity);
    }

    #[test]
    fn spectral_reduces_against_image() {
        // d z = x - y, l(z) = 3, l(x) = 2, l(y) = 0; [x] = [y] has rho 0
        let gens = vec![
            Generator::new("z", 1, Rat::from_int(3)),
            Generator::new("x", 0, Rat::from_int(2)),
            Generator::new("y", 0, Rat::zero()),
        ];
        let mut d = linalg::zeros(&QField, 3, 3);
        d[1][0] = q("1");
        d[2][0] = q("-1");
        let c = FilteredComplex::new(&QField, gens, d, Mode::Strict).unwrap();
        let x = vec![q("0"), q("1"), q("0")];
        let r = c.spectral_with_representative(&x).unwrap();
        assert_eq!(r.value, SpectralValue::Finite(Rat::zero()));
        assert_eq!(c.level(&r.representative).unwrap(), Some(Rat::zero()));
        let tx = vec![q("0"), q("T^(1/2)"), q("0")];
        assert_eq!(c.spectral_invariant(&tx).unwrap(), SpectralValue::Finite(Rat::new(-1, 2)));
        assert!(matches!(c.spectral_invariant(&[q("1"), q("0"), q("0")]), Err(FilteredError::NotClosed)));
    }

    #[test]
    fn opposite_preserves_bars() {
        let c = two_gen("T^(1/2) + T", Rat::one(), Rat::new(1, 3));
        assert_eq!(c.barcode().unwrap().finite, c.opposite().barcode().unwrap().finite);
    }
}
