//! Finite-alphabet information measures.
//!
//! Everything here is in bits (see [`crate::LOG_BASE`]) and uses the
//! convention `0 log 0 = 0`.

use crate::error::{Error, Result};

/// Absolute slack tolerated on probabilities and on total mass.
pub const PROB_SLACK: f64 = 1e-12;

/// Tables larger than this are summed with compensated accumulation.
const COMPENSATED_SUM_THRESHOLD: usize = 10_000;

fn check_probability(name: &'static str, p: f64) -> Result<f64> {
    if !p.is_finite() || !(-PROB_SLACK..=1.0 + PROB_SLACK).contains(&p) {
        return Err(Error::domain(name, p, "[0, 1]"));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// `-p log2 p`, zero at the origin.
#[inline]
fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Binary entropy `Hb(p)` in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    let p = check_probability("p", p)?;
    Ok(plogp(p) + plogp(1.0 - p))
}

/// Binary convolution `x * y = x(1-y) + y(1-x)`, the parameter of the XOR of
/// two independent Bernoulli variables.
pub fn binary_convolve(x: f64, y: f64) -> Result<f64> {
    let x = check_probability("x", x)?;
    let y = check_probability("y", y)?;
    Ok((x * (1.0 - y) + y * (1.0 - x)).clamp(0.0, 1.0))
}

/// Neumaier summation, used for large tables.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

fn accumulate<I: IntoIterator<Item = f64>>(terms: I, atoms: usize) -> f64 {
    if atoms > COMPENSATED_SUM_THRESHOLD {
        compensated_sum(terms)
    } else {
        terms.into_iter().sum()
    }
}

/// Validates a probability vector in place: entries within slack of the
/// valid range are clipped, and a total within slack of one is renormalized.
fn normalize(values: &mut [f64], what: &str) -> Result<()> {
    for (i, v) in values.iter_mut().enumerate() {
        if !v.is_finite() || *v < -PROB_SLACK {
            return Err(Error::Distribution(format!(
                "{what}: entry {i} = {v} is negative or not finite"
            )));
        }
        *v = v.max(0.0);
    }
    let total: f64 = values.iter().sum();
    if (total - 1.0).abs() > PROB_SLACK {
        return Err(Error::Distribution(format!(
            "{what}: total mass {total} differs from 1"
        )));
    }
    values.iter_mut().for_each(|v| *v /= total);
    Ok(())
}

/// A probability mass function over `0..len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    atoms: Vec<f64>,
}

impl Pmf {
    pub fn new(atoms: Vec<f64>) -> Result<Self> {
        let mut atoms = atoms;
        if atoms.is_empty() {
            return Err(Error::Distribution("empty pmf".into()));
        }
        normalize(&mut atoms, "pmf")?;
        Ok(Self { atoms })
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Distribution("empty pmf".into()));
        }
        Ok(Self {
            atoms: vec![1.0 / k as f64; k],
        })
    }

    pub fn point_mass(k: usize, at: usize) -> Result<Self> {
        if at >= k {
            return Err(Error::Index(format!(
                "atom {at} outside alphabet of size {k}"
            )));
        }
        let mut atoms = vec![0.0; k];
        atoms[at] = 1.0;
        Ok(Self { atoms })
    }

    /// Bernoulli law `[1 - p, p]`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        let p = check_probability("p", p)?;
        Ok(Self {
            atoms: vec![1.0 - p, p],
        })
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// Shannon entropy of a pmf in bits.
pub fn entropy(p: &Pmf) -> f64 {
    accumulate(p.atoms.iter().map(|&a| plogp(a)), p.len()).max(0.0)
}

/// Dense joint distribution over several finite variables, stored row-major
/// (last coordinate varies fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    shape: Vec<usize>,
    mass: Vec<f64>,
}

impl JointTable {
    pub fn new(shape: Vec<usize>, mass: Vec<f64>) -> Result<Self> {
        let expected: usize = shape.iter().product();
        if shape.is_empty() || shape.contains(&0) {
            return Err(Error::Shape(format!("invalid table shape {shape:?}")));
        }
        if expected != mass.len() {
            return Err(Error::Shape(format!(
                "shape {shape:?} holds {expected} entries, got {}",
                mass.len()
            )));
        }
        let mut mass = mass;
        normalize(&mut mass, "joint table")?;
        Ok(Self { shape, mass })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    /// Probability of a single outcome given one coordinate per variable.
    pub fn get(&self, index: &[usize]) -> f64 {
        let mut flat = 0;
        for (&i, &n) in index.iter().zip(&self.shape) {
            flat = flat * n + i;
        }
        self.mass[flat]
    }

    fn check_vars(&self, vars: &[usize]) -> Result<()> {
        for (k, &v) in vars.iter().enumerate() {
            if v >= self.shape.len() {
                return Err(Error::Index(format!(
                    "variable {v} outside table with {} variables",
                    self.shape.len()
                )));
            }
            if vars[..k].contains(&v) {
                return Err(Error::Index(format!("variable {v} listed twice")));
            }
        }
        Ok(())
    }

    /// Marginal over `vars`, with coordinates in the order given.
    pub fn marginal(&self, vars: &[usize]) -> Result<JointTable> {
        self.check_vars(vars)?;
        let shape: Vec<usize> = if vars.is_empty() {
            vec![1]
        } else {
            vars.iter().map(|&v| self.shape[v]).collect()
        };
        let mut mass = vec![0.0; shape.iter().product()];
        let mut index = vec![0usize; self.shape.len()];
        for &p in &self.mass {
            let mut flat = 0;
            for &v in vars {
                flat = flat * self.shape[v] + index[v];
            }
            mass[flat] += p;
            advance(&mut index, &self.shape);
        }
        Ok(JointTable { shape, mass })
    }

    /// `I(A; B | C)` in bits for disjoint variable sets, by direct
    /// summation of `p(a,b,c) log [p(a,b,c) p(c) / (p(a,c) p(b,c))]`.
    pub fn conditional_mutual_information(
        &self,
        a: &[usize],
        b: &[usize],
        c: &[usize],
    ) -> Result<f64> {
        let all: Vec<usize> = a.iter().chain(b).chain(c).copied().collect();
        self.check_vars(&all)?;
        if a.is_empty() || b.is_empty() {
            return Err(Error::Index(
                "mutual information needs nonempty A and B".into(),
            ));
        }
        let abc = self.marginal(&all)?;
        let (na, nb) = (a.len(), b.len());
        let ac_vars: Vec<usize> = (0..na).chain(na + nb..all.len()).collect();
        let bc_vars: Vec<usize> = (na..all.len()).collect();
        let c_vars: Vec<usize> = (na + nb..all.len()).collect();
        let ac = abc.marginal(&ac_vars)?;
        let bc = abc.marginal(&bc_vars)?;
        let cc = abc.marginal(&c_vars)?;

        let shape = abc.shape.clone();
        let mut index = vec![0usize; shape.len()];
        let mut terms = Vec::with_capacity(abc.mass.len());
        let pick = |idx: &[usize], vars: &[usize]| -> Vec<usize> {
            if vars.is_empty() {
                vec![0]
            } else {
                vars.iter().map(|&v| idx[v]).collect()
            }
        };
        for &p in &abc.mass {
            if p > 0.0 {
                let p_ac = ac.get(&pick(&index, &ac_vars));
                let p_bc = bc.get(&pick(&index, &bc_vars));
                let p_c = cc.get(&pick(&index, &c_vars));
                terms.push(p * ((p * p_c) / (p_ac * p_bc)).log2());
            }
            advance(&mut index, &shape);
        }
        Ok(accumulate(terms, abc.mass.len()).max(0.0))
    }

    /// Joint entropy of the variables in `vars`.
    pub fn entropy_of(&self, vars: &[usize]) -> Result<f64> {
        let m = self.marginal(vars)?;
        Ok(accumulate(m.mass.iter().map(|&p| plogp(p)), m.mass.len()).max(0.0))
    }
}

/// Row-major odometer increment.
fn advance(index: &mut [usize], shape: &[usize]) {
    for k in (0..shape.len()).rev() {
        index[k] += 1;
        if index[k] < shape[k] {
            return;
        }
        index[k] = 0;
    }
}

/// Convenience for `I(A;B|C)` on single-variable A and B.
pub fn conditional_mutual_information(
    t: &JointTable,
    a: usize,
    b: usize,
    c: &[usize],
) -> Result<f64> {
    t.conditional_mutual_information(&[a], &[b], c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // -0.2 log2 0.2 - 0.8 log2 0.8
        assert_abs_diff_eq!(
            binary_entropy(0.2).unwrap(),
            0.7219280948873623,
            epsilon = 1e-15
        );
        assert!(binary_entropy(1.0 + 1e-13).is_ok());
        assert!(matches!(binary_entropy(1.01), Err(Error::Domain { .. })));
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn binary_entropy_is_symmetric_on_dense_grid() {
        for i in 0..=10_000 {
            let p = i as f64 / 10_000.0;
            let d = binary_entropy(p).unwrap() - binary_entropy(1.0 - p).unwrap();
            assert!(d.abs() <= 1e-12, "p = {p}");
        }
    }

    #[test]
    fn convolution_values() {
        assert_eq!(binary_convolve(0.3, 0.0).unwrap(), 0.3);
        assert_eq!(binary_convolve(0.3, 0.5).unwrap(), 0.5);
        assert_abs_diff_eq!(binary_convolve(0.4, 0.26).unwrap(), 0.452, epsilon = 1e-15);
        assert!(binary_convolve(0.4, 1.5).is_err());
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(&Pmf::uniform(4).unwrap()), 2.0);
        assert_eq!(entropy(&Pmf::point_mass(3, 1).unwrap()), 0.0);
        assert_abs_diff_eq!(
            entropy(&Pmf::new(vec![0.5, 0.25, 0.25]).unwrap()),
            1.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn pmf_validation() {
        assert!(Pmf::new(vec![0.5, 0.5 + 1e-13]).is_ok());
        assert!(Pmf::new(vec![0.5, 0.48]).is_err());
        assert!(Pmf::new(vec![1.1, -0.1]).is_err());
        assert!(Pmf::new(vec![]).is_err());
        let p = Pmf::new(vec![0.25, 0.75 + 5e-13]).unwrap();
        assert_abs_diff_eq!(p.atoms().iter().sum::<f64>(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn table_shape_errors() {
        assert!(matches!(
            JointTable::new(vec![2, 2], vec![0.5, 0.5]),
            Err(Error::Shape(_))
        ));
        let t = JointTable::new(vec![2, 2], vec![0.25; 4]).unwrap();
        assert!(matches!(
            t.conditional_mutual_information(&[0], &[3], &[]),
            Err(Error::Index(_))
        ));
        assert!(t.conditional_mutual_information(&[0], &[0], &[]).is_err());
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn cmi_independence_and_copy() {
        // A ⊥ B | C: p(a,b,c) = p(c) p(a|c) p(b|c)
        let pc = [0.3, 0.7];
        let pa = [[0.2, 0.8], [0.6, 0.4]];
        let pb = [[0.9, 0.1], [0.5, 0.5]];
        let mut mass = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    mass.push(pc[c] * pa[c][a] * pb[c][b]);
                }
            }
        }
        let t = JointTable::new(vec![2, 2, 2], mass).unwrap();
        assert_abs_diff_eq!(
            conditional_mutual_information(&t, 0, 1, &[2]).unwrap(),
            0.0,
            epsilon = 1e-15
        );

        // A = B uniform, C constant
        let t = JointTable::new(vec![2, 2, 1], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_abs_diff_eq!(
            conditional_mutual_information(&t, 0, 1, &[2]).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn cmi_binary_dpc_state_leakage() {
        // (S, U1) with U1 = X1 xor S, P(X1=1|S=0) = 0.1, P(X1=0|S=1) = 0.9
        let (q, a10, a01) = (0.2, 0.1, 0.9);
        let mass = vec![
            (1.0 - q) * (1.0 - a10),
            (1.0 - q) * a10,
            q * (1.0 - a01),
            q * a01,
        ];
        let t = JointTable::new(vec![2, 2], mass).unwrap();
        let hb = |p| binary_entropy(p).unwrap();
        let expected = hb(0.26) - (0.8 * hb(0.1) + 0.2 * hb(0.9));
        let got = conditional_mutual_information(&t, 0, 1, &[]).unwrap();
        assert_abs_diff_eq!(got, expected, epsilon = 1e-14);
        assert_abs_diff_eq!(got, 0.3577507789033366, epsilon = 1e-12);
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let terms = [1e16, 1.0, -1e16];
        assert_eq!(compensated_sum(terms), 1.0);
    }

    fn random_table(dims: Vec<usize>, raw: Vec<f64>) -> JointTable {
        let n: usize = dims.iter().product();
        let w: Vec<f64> = raw.into_iter().take(n).collect();
        let total: f64 = w.iter().sum();
        JointTable::new(dims, w.into_iter().map(|x| x / total).collect()).unwrap()
    }

    fn table_strategy() -> impl Strategy<Value = JointTable> {
        prop::collection::vec(1usize..=3, 4).prop_flat_map(|dims| {
            let n: usize = dims.iter().product();
            prop::collection::vec(0.0f64..1.0, n)
                .prop_filter("nonzero mass", |w| w.iter().sum::<f64>() > 1e-3)
                .prop_map(move |w| random_table(dims.clone(), w))
        })
    }

    proptest! {
        #[test]
        fn convolution_contracts_towards_half(x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
            let z = binary_convolve(x, y).unwrap();
            prop_assert!((z - 0.5).abs() <= (x - 0.5).abs() + 1e-15);
            prop_assert!((z - binary_convolve(y, x).unwrap()).abs() <= 1e-15);
        }

        #[test]
        fn cmi_is_nonnegative(t in table_strategy()) {
            let i = t.conditional_mutual_information(&[0], &[1], &[2, 3]).unwrap();
            prop_assert!(i >= 0.0);
            let j = t.conditional_mutual_information(&[0, 3], &[1], &[]).unwrap();
            prop_assert!(j >= 0.0);
        }

        #[test]
        fn cmi_chain_rule(t in table_strategy()) {
            // I(A,B;Y|C) = I(A;Y|C) + I(B;Y|A,C) with A=0, B=1, Y=2, C=3
            let lhs = t.conditional_mutual_information(&[0, 1], &[2], &[3]).unwrap();
            let rhs = t.conditional_mutual_information(&[0], &[2], &[3]).unwrap()
                + t.conditional_mutual_information(&[1], &[2], &[0, 3]).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10);
        }

        #[test]
        fn cmi_matches_entropy_identity(t in table_strategy()) {
            // I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)
            let direct = t.conditional_mutual_information(&[0], &[1], &[2]).unwrap();
            let via_h = t.entropy_of(&[0, 2]).unwrap() + t.entropy_of(&[1, 2]).unwrap()
                - t.entropy_of(&[0, 1, 2]).unwrap() - t.entropy_of(&[2]).unwrap();
            prop_assert!((direct - via_h.max(0.0)).abs() < 1e-10);
        }
    }
}
