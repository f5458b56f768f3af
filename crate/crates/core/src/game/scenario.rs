use crate::error::{Error, Result};
use crate::game::SubsetIndex;

/// Mixed-radix encoding of tuples. The last digit varies fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Radix {
    sizes: Vec<usize>,
}

impl Radix {
    pub fn new(sizes: Vec<usize>) -> Self {
        Radix { sizes }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.sizes.len());
        digits
            .iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&d, &s)| {
                debug_assert!(d < s);
                acc * s + d
            })
    }

    pub fn decode_into(&self, mut index: usize, digits: &mut [usize]) {
        for (d, &s) in digits.iter_mut().zip(&self.sizes).rev() {
            *d = index % s;
            index /= s;
        }
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.sizes.len()];
        self.decode_into(index, &mut digits);
        digits
    }

    /// `map[i]` = encoding of the sub-tuple of digits `positions` of tuple `i`.
    pub fn projection(&self, positions: &[usize]) -> Vec<usize> {
        let sub = Radix::new(positions.iter().map(|&p| self.sizes[p]).collect());
        let mut digits = vec![0; self.sizes.len()];
        let mut picked = vec![0; positions.len()];
        (0..self.len())
            .map(|i| {
                self.decode_into(i, &mut digits);
                for (slot, &p) in picked.iter_mut().zip(positions) {
                    *slot = digits[p];
                }
                sub.encode(&picked)
            })
            .collect()
    }
}

/// Configurable size caps. Tables for repeated games grow exponentially and
/// construction fails with [`Error::Resource`] instead of exhausting memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Cap on `|A̲|·|X̲|` for any correlation or predicate table.
    pub max_table_entries: u128,
    /// Cap on the number of deterministic strategies enumerated for the
    /// classical value.
    pub max_deterministic_strategies: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_table_entries: 10_000_000,
            max_deterministic_strategies: 100_000_000,
        }
    }
}

impl Limits {
    pub(crate) fn check_table(&self, what: &'static str, required: u128) -> Result<()> {
        if required > self.max_table_entries {
            return Err(Error::Resource { what, required, cap: self.max_table_entries });
        }
        Ok(())
    }
}

/// Player count plus per-player input and output alphabet sizes.
///
/// Joint tables over `A̲ × X̲` are laid out row-major with the output tuple
/// fastest: entry `(a̲, x̲)` lives at `x̲·|A̲| + a̲`, where both tuples are
/// mixed-radix encoded with the last player fastest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scenario {
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    input_count: usize,
    output_count: usize,
}

impl Scenario {
    pub fn new(inputs: Vec<usize>, outputs: Vec<usize>) -> Result<Self> {
        if inputs.is_empty() || inputs.len() > super::subset::MAX_PLAYERS {
            return Err(Error::shape(format!("unsupported player count {}", inputs.len())));
        }
        if inputs.len() != outputs.len() {
            return Err(Error::shape(format!(
                "{} input alphabets but {} output alphabets",
                inputs.len(),
                outputs.len()
            )));
        }
        if inputs.iter().chain(&outputs).any(|&s| s == 0) {
            return Err(Error::shape("alphabet sizes must be positive"));
        }
        let input_count = checked_product(&inputs)?;
        let output_count = checked_product(&outputs)?;
        input_count
            .checked_mul(output_count)
            .ok_or_else(|| Error::shape("table size overflows"))?;
        Ok(Scenario { inputs, outputs, input_count, output_count })
    }

    /// Binary inputs and outputs for every player.
    pub fn binary(players: usize) -> Self {
        Scenario::new(vec![2; players], vec![2; players]).expect("valid binary scenario")
    }

    pub fn players(&self) -> usize {
        self.inputs.len()
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// `|X̲|`.
    pub fn input_count(&self) -> usize {
        self.input_count
    }

    /// `|A̲|`.
    pub fn output_count(&self) -> usize {
        self.output_count
    }

    /// `|A̲|·|X̲|`.
    pub fn table_len(&self) -> usize {
        self.input_count * self.output_count
    }

    pub fn input_radix(&self) -> Radix {
        Radix::new(self.inputs.clone())
    }

    pub fn output_radix(&self) -> Radix {
        Radix::new(self.outputs.clone())
    }

    pub fn entry(&self, outputs: usize, inputs: usize) -> usize {
        inputs * self.output_count + outputs
    }

    /// `|A_I|`.
    pub fn subset_output_count(&self, subset: &SubsetIndex) -> usize {
        subset.members().iter().map(|&i| self.outputs[i]).product()
    }

    /// `|X_I|`.
    pub fn subset_input_count(&self, subset: &SubsetIndex) -> usize {
        subset.members().iter().map(|&i| self.inputs[i]).product()
    }

    /// Maps every `a̲` to the index of `a_I`.
    pub fn output_projection(&self, subset: &SubsetIndex) -> Vec<usize> {
        self.output_radix().projection(&subset.members())
    }

    /// Maps every `x̲` to the index of `x_I`.
    pub fn input_projection(&self, subset: &SubsetIndex) -> Vec<usize> {
        self.input_radix().projection(&subset.members())
    }

    /// Maps every `x̲` to the index of `x_{I^c}`.
    pub fn input_complement_projection(&self, subset: &SubsetIndex) -> Vec<usize> {
        self.input_radix().projection(&subset.complement())
    }

    pub(crate) fn check_same(&self, other: &Scenario, what: &str) -> Result<()> {
        if self != other {
            return Err(Error::shape(format!(
                "{what}: alphabets differ (inputs {:?} / outputs {:?} vs inputs {:?} / outputs {:?})",
                self.inputs, self.outputs, other.inputs, other.outputs
            )));
        }
        Ok(())
    }

    /// Per-player alphabet product, `X_i × X'_i` with the first factor most
    /// significant.
    pub fn round_product(&self, other: &Scenario) -> Result<Scenario> {
        if self.players() != other.players() {
            return Err(Error::shape("round product needs equal player counts"));
        }
        let mul = |a: &[usize], b: &[usize]| -> Vec<usize> { a.iter().zip(b).map(|(x, y)| x * y).collect() };
        Scenario::new(mul(&self.inputs, &other.inputs), mul(&self.outputs, &other.outputs))
    }

    /// For `self ⊗ other` (see [`Scenario::round_product`]), maps a pair of flat
    /// input indices (or output indices, with `outputs = true`) to the flat index
    /// in the product.
    pub(crate) fn round_product_map(&self, other: &Scenario, outputs: bool) -> Vec<usize> {
        let (left, right) = if outputs {
            (self.output_radix(), other.output_radix())
        } else {
            (self.input_radix(), other.input_radix())
        };
        let joint = Radix::new(left.sizes().iter().zip(right.sizes()).map(|(a, b)| a * b).collect());
        let mut l = vec![0; left.sizes().len()];
        let mut r = vec![0; right.sizes().len()];
        let mut j = vec![0; joint.sizes().len()];
        let mut map = Vec::with_capacity(left.len() * right.len());
        for li in 0..left.len() {
            left.decode_into(li, &mut l);
            for ri in 0..right.len() {
                right.decode_into(ri, &mut r);
                for p in 0..j.len() {
                    j[p] = l[p] * right.sizes()[p] + r[p];
                }
                map.push(joint.encode(&j));
            }
        }
        map
    }
}

fn checked_product(sizes: &[usize]) -> Result<usize> {
    sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .ok_or_else(|| Error::shape("alphabet product overflows"))
}
