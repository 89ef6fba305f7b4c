//! Discrete factor models with monomial-valued local factors.
//!
//! One representation covers directed models (one factor per conditional
//! probability table) and undirected ones (one factor per maximal clique).
//! Table entries are exponent vectors; a missing entry is a structural zero.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dp::{eliminate, Var};
use crate::geometry::ExponentVector;
use crate::{Error, Rational, Result};

/// Local factor: a partial table from joint assignments of its scope to
/// monomials. Hidden scope digits come first, then observed ones, each in
/// alphabet order with the first scope variable most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    scope_hidden: Vec<usize>,
    scope_observed: Vec<usize>,
    hidden_radix: usize,
    observed_radix: usize,
    entries: Vec<Option<ExponentVector>>,
}

impl Factor {
    pub fn new(scope_hidden: Vec<usize>, scope_observed: Vec<usize>, hidden_radix: usize, observed_radix: usize) -> Self {
        let size = hidden_radix.pow(scope_hidden.len() as u32) * observed_radix.pow(scope_observed.len() as u32);
        Self { scope_hidden, scope_observed, hidden_radix, observed_radix, entries: vec![None; size] }
    }

    pub fn scope_hidden(&self) -> &[usize] {
        &self.scope_hidden
    }

    pub fn scope_observed(&self) -> &[usize] {
        &self.scope_observed
    }

    fn index(&self, hidden: &[usize], observed: &[usize]) -> usize {
        let mut idx = 0;
        for &h in hidden {
            idx = idx * self.hidden_radix + h;
        }
        for &o in observed {
            idx = idx * self.observed_radix + o;
        }
        idx
    }

    pub fn set(&mut self, hidden: &[usize], observed: &[usize], value: ExponentVector) {
        let i = self.index(hidden, observed);
        self.entries[i] = Some(value);
    }

    pub fn get(&self, hidden: &[usize], observed: &[usize]) -> Option<&ExponentVector> {
        self.entries[self.index(hidden, observed)].as_ref()
    }

    /// Defined entries as `(hidden digits, observed digits, monomial)`.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, Vec<usize>, &ExponentVector)> + '_ {
        let (nh, no) = (self.scope_hidden.len(), self.scope_observed.len());
        self.entries.iter().enumerate().filter_map(move |(mut idx, e)| {
            let e = e.as_ref()?;
            let mut observed = vec![0; no];
            for k in (0..no).rev() {
                observed[k] = idx % self.observed_radix;
                idx /= self.observed_radix;
            }
            let mut hidden = vec![0; nh];
            for k in (0..nh).rev() {
                hidden[k] = idx % self.hidden_radix;
                idx /= self.hidden_radix;
            }
            Some((hidden, observed, e))
        })
    }
}

/// Vector of log-parameters `v_i = log θ_i`, kept rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParameterPoint(pub Vec<Rational>);

impl ParameterPoint {
    pub fn from_ints(v: &[i64]) -> Self {
        Self(v.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, x: &ExponentVector) -> Rational {
        x.dot(&crate::Direction(self.0.clone()))
    }

    pub fn scale(&self, by: &Rational) -> Self {
        Self(self.0.iter().map(|c| c * by).collect())
    }
}

impl FromStr for ParameterPoint {
    type Err = Error;

    /// Comma-separated rationals, each `p/q` or an integer.
    fn from_str(s: &str) -> Result<Self> {
        s.split(',').map(|t| parse_rational(t.trim())).collect::<Result<Vec<_>>>().map(Self)
    }
}

/// Parses `p/q` or an integer. Decimal and exponent notation are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational of the form p/q: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let digits = |t: &str, signed: bool| {
        let body = if signed { t.strip_prefix(['-', '+']).unwrap_or(t) } else { t };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(num, true) || !digits(den, false) {
        return Err(bad());
    }
    let n: num_bigint::BigInt = num.parse().map_err(|_| bad())?;
    let d: num_bigint::BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Discrete model with hidden and observed variables over finite alphabets
/// and monomial-valued factors in `d` parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorModel {
    pub name: String,
    params: Vec<String>,
    hidden_alphabet: Vec<String>,
    hidden_count: usize,
    observed_alphabet: Vec<String>,
    observed_count: usize,
    factors: Vec<Factor>,
    edges: Option<usize>,
}

impl FactorModel {
    pub fn new(
        name: impl Into<String>,
        params: Vec<String>,
        hidden_alphabet: Vec<String>,
        hidden_count: usize,
        observed_alphabet: Vec<String>,
        observed_count: usize,
    ) -> Result<Self> {
        if hidden_count == 0 || observed_count == 0 {
            return Err(Error::Model("hidden and observed counts must be positive".into()));
        }
        if hidden_alphabet.is_empty() || observed_alphabet.is_empty() {
            return Err(Error::Model("alphabets must be nonempty".into()));
        }
        for alpha in [&hidden_alphabet, &observed_alphabet] {
            let mut sorted = alpha.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != alpha.len() {
                return Err(Error::Model("duplicate alphabet symbol".into()));
            }
        }
        Ok(Self {
            name: name.into(),
            params,
            hidden_alphabet,
            hidden_count,
            observed_alphabet,
            observed_count,
            factors: Vec::new(),
            edges: None,
        })
    }

    /// Adds a factor after checking its scope and entry dimensions.
    pub fn push_factor(&mut self, factor: Factor) -> Result<()> {
        if factor.hidden_radix != self.hidden_alphabet.len() || factor.observed_radix != self.observed_alphabet.len() {
            return Err(Error::Model("factor radix does not match the alphabets".into()));
        }
        if let Some(&h) = factor.scope_hidden.iter().find(|&&h| h >= self.hidden_count) {
            return Err(Error::Model(format!("hidden variable {h} out of range")));
        }
        if let Some(&o) = factor.scope_observed.iter().find(|&&o| o >= self.observed_count) {
            return Err(Error::Model(format!("observed variable {o} out of range")));
        }
        let d = self.d();
        if let Some(bad) = factor.entries.iter().flatten().find(|e| e.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: bad.dim() });
        }
        self.factors.push(factor);
        Ok(())
    }

    pub fn with_edges(mut self, edges: usize) -> Self {
        self.edges = Some(edges);
        self
    }

    pub fn d(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn hidden_alphabet(&self) -> &[String] {
        &self.hidden_alphabet
    }

    pub fn observed_alphabet(&self) -> &[String] {
        &self.observed_alphabet
    }

    /// Number of hidden variables `q`.
    pub fn hidden_count(&self) -> usize {
        self.hidden_count
    }

    /// Number of observed variables `n`.
    pub fn observed_count(&self) -> usize {
        self.observed_count
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn edges(&self) -> Option<usize> {
        self.edges
    }

    /// `l'^n`, the number of observations.
    pub fn observation_count(&self) -> u128 {
        (self.observed_alphabet.len() as u128).saturating_pow(self.observed_count as u32)
    }

    fn check_assignment(&self, which: &'static str, values: &[usize], len: usize, radix: usize) -> Result<()> {
        if values.len() != len {
            return Err(Error::DimensionMismatch { expected: len, found: values.len() });
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= radix) {
            return Err(Error::UnknownSymbol { which, symbol: format!("#{bad}") });
        }
        Ok(())
    }

    pub(crate) fn check_observation(&self, tau: &[usize]) -> Result<()> {
        self.check_assignment("observed", tau, self.observed_count, self.observed_alphabet.len())
    }

    /// The monomial `f_{h,τ}` as an exponent vector, or `None` when some
    /// factor entry is a structural zero.
    pub fn monomial_of(&self, h: &[usize], tau: &[usize]) -> Result<Option<ExponentVector>> {
        self.check_assignment("hidden", h, self.hidden_count, self.hidden_alphabet.len())?;
        self.check_observation(tau)?;
        let mut acc = ExponentVector::zeros(self.d());
        for f in &self.factors {
            let hv: Vec<usize> = f.scope_hidden.iter().map(|&i| h[i]).collect();
            let ov: Vec<usize> = f.scope_observed.iter().map(|&i| tau[i]).collect();
            match f.get(&hv, &ov) {
                Some(e) => acc = acc.add(e),
                None => return Ok(None),
            }
        }
        Ok(Some(acc))
    }

    /// Maximum total degree of a positive-probability monomial over all
    /// observations and hidden assignments.
    pub fn complexity(&self) -> u64 {
        let order = self.free_order();
        let tau = vec![None; self.observed_count];
        let best: Option<Degree> = eliminate(self, &order, &tau, Degree(0));
        best.map_or(0, |d| d.0.max(0) as u64)
    }

    /// Hidden variables in index order, each observed variable placed right
    /// after the last hidden variable of the first factor that mentions it.
    fn free_order(&self) -> Vec<Var> {
        let mut after: Vec<Option<Option<usize>>> = vec![None; self.observed_count];
        for f in &self.factors {
            let last = f.scope_hidden.iter().copied().max();
            for &o in &f.scope_observed {
                if after[o].is_none() {
                    after[o] = Some(last);
                }
            }
        }
        let mut order: Vec<Var> = Vec::new();
        let place = |slot: Option<usize>, order: &mut Vec<Var>| {
            for (o, a) in after.iter().enumerate() {
                if a.unwrap_or(None) == slot && (a.is_some() || slot.is_none()) {
                    order.push(Var::Observed(o));
                }
            }
        };
        place(None, &mut order);
        for h in 0..self.hidden_count {
            order.push(Var::Hidden(h));
            place(Some(h), &mut order);
        }
        order
    }

    fn single_char_symbols(&self) -> bool {
        self.hidden_alphabet.iter().chain(&self.observed_alphabet).all(|s| s.chars().count() == 1)
    }

    fn parse_symbols(&self, which: &'static str, alphabet: &[String], text: &str) -> Result<Vec<usize>> {
        let tokens: Vec<String> = if alphabet.iter().all(|s| s.chars().count() == 1) && !text.contains([' ', ',']) {
            text.chars().map(String::from).collect()
        } else {
            text.split([' ', ',']).filter(|t| !t.is_empty()).map(String::from).collect()
        };
        tokens
            .into_iter()
            .map(|t| alphabet.iter().position(|s| *s == t).ok_or(Error::UnknownSymbol { which, symbol: t }))
            .collect()
    }

    /// Parses an observation: one character per symbol for single-character
    /// alphabets, otherwise space- or comma-separated symbols.
    pub fn parse_observation(&self, text: &str) -> Result<Vec<usize>> {
        let tau = self.parse_symbols("observed", &self.observed_alphabet, text)?;
        self.check_observation(&tau)?;
        Ok(tau)
    }

    pub fn parse_hidden(&self, text: &str) -> Result<Vec<usize>> {
        let h = self.parse_symbols("hidden", &self.hidden_alphabet, text)?;
        self.check_assignment("hidden", &h, self.hidden_count, self.hidden_alphabet.len())?;
        Ok(h)
    }

    fn format_symbols(alphabet: &[String], values: &[usize]) -> String {
        let single = alphabet.iter().all(|s| s.chars().count() == 1);
        let parts: Vec<&str> = values.iter().map(|&v| alphabet[v].as_str()).collect();
        parts.join(if single { "" } else { " " })
    }

    pub fn format_hidden(&self, h: &[usize]) -> String {
        Self::format_symbols(&self.hidden_alphabet, h)
    }

    pub fn format_observation(&self, tau: &[usize]) -> String {
        Self::format_symbols(&self.observed_alphabet, tau)
    }

    /// Decodes the `index`-th observation in lexicographic order.
    pub fn observation_at(&self, mut index: u128) -> Vec<usize> {
        let radix = self.observed_alphabet.len() as u128;
        let mut tau = vec![0; self.observed_count];
        for k in (0..self.observed_count).rev() {
            tau[k] = (index % radix) as usize;
            index /= radix;
        }
        tau
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ModelFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

#[derive(Clone, Copy, Debug)]
struct Degree(i64);

impl crate::dp::DpValue for Degree {
    fn extend(&self, monomial: &ExponentVector, _symbol: Option<usize>) -> Self {
        Degree(self.0 + monomial.total_degree())
    }

    fn merge(self, other: Self) -> Self {
        Degree(self.0.max(other.0))
    }
}

#[derive(Serialize, Deserialize)]
struct VariableBlock {
    alphabet: Vec<String>,
    count: usize,
}

#[derive(Serialize, Deserialize)]
struct FactorBlock {
    scope_hidden: Vec<usize>,
    scope_observed: Vec<usize>,
    table: BTreeMap<String, Vec<i64>>,
}

/// On-disk JSON schema. Table keys are the scope's symbols, hidden then
/// observed, concatenated when every symbol of both alphabets is a single
/// character and comma-joined otherwise.
#[derive(Serialize, Deserialize)]
struct ModelFile {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    name: String,
    d: usize,
    params: Vec<String>,
    hidden: VariableBlock,
    observed: VariableBlock,
    factors: Vec<FactorBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<usize>,
}

impl From<&FactorModel> for ModelFile {
    fn from(m: &FactorModel) -> Self {
        let sep = if m.single_char_symbols() { "" } else { "," };
        let factors = m
            .factors
            .iter()
            .map(|f| {
                let table = f
                    .entries()
                    .map(|(h, o, e)| {
                        let mut parts: Vec<&str> = h.iter().map(|&x| m.hidden_alphabet[x].as_str()).collect();
                        parts.extend(o.iter().map(|&x| m.observed_alphabet[x].as_str()));
                        (parts.join(sep), e.0.clone())
                    })
                    .collect();
                FactorBlock { scope_hidden: f.scope_hidden.clone(), scope_observed: f.scope_observed.clone(), table }
            })
            .collect();
        ModelFile {
            name: m.name.clone(),
            d: m.d(),
            params: m.params.clone(),
            hidden: VariableBlock { alphabet: m.hidden_alphabet.clone(), count: m.hidden_count },
            observed: VariableBlock { alphabet: m.observed_alphabet.clone(), count: m.observed_count },
            factors,
            edges: m.edges,
        }
    }
}

impl TryFrom<ModelFile> for FactorModel {
    type Error = Error;

    fn try_from(file: ModelFile) -> Result<Self> {
        if file.params.len() != file.d {
            return Err(Error::Model(format!("d = {} but {} parameter names", file.d, file.params.len())));
        }
        let mut model = FactorModel::new(
            file.name,
            file.params,
            file.hidden.alphabet,
            file.hidden.count,
            file.observed.alphabet,
            file.observed.count,
        )?;
        model.edges = file.edges;
        let single = model.single_char_symbols();
        for block in file.factors {
            let (nh, no) = (block.scope_hidden.len(), block.scope_observed.len());
            let mut f = Factor::new(
                block.scope_hidden,
                block.scope_observed,
                model.hidden_alphabet.len(),
                model.observed_alphabet.len(),
            );
            for (key, value) in block.table {
                let tokens: Vec<String> = if single {
                    key.chars().map(String::from).collect()
                } else if key.is_empty() {
                    Vec::new()
                } else {
                    key.split(',').map(String::from).collect()
                };
                if tokens.len() != nh + no {
                    return Err(Error::Model(format!("table key {key:?} does not match the factor scope")));
                }
                let lookup = |alpha: &[String], t: &str, which| {
                    alpha.iter().position(|s| s == t).ok_or(Error::UnknownSymbol { which, symbol: t.to_string() })
                };
                let hidden: Vec<usize> =
                    tokens[..nh].iter().map(|t| lookup(&model.hidden_alphabet, t, "hidden")).collect::<Result<_>>()?;
                let observed: Vec<usize> =
                    tokens[nh..].iter().map(|t| lookup(&model.observed_alphabet, t, "observed")).collect::<Result<_>>()?;
                f.set(&hidden, &observed, ExponentVector(value));
            }
            model.push_factor(f)?;
        }
        Ok(model)
    }
}

/// Exponent tables for a homogeneous HMM: `transition[i][j]` is the monomial
/// of moving from hidden state `i` to `j`, `emission[i][k]` of state `i`
/// emitting symbol `k`. `None` marks a structural zero.
#[derive(Clone, Debug)]
pub struct HmmTables {
    pub params: Vec<String>,
    pub transition: Vec<Vec<Option<ExponentVector>>>,
    pub emission: Vec<Vec<Option<ExponentVector>>>,
}

impl HmmTables {
    /// Every transition and emission probability is its own parameter:
    /// `t{ij}` in row-major order followed by `s{ik}`.
    pub fn identity(l: usize, l_obs: usize) -> Self {
        let d = l * l + l * l_obs;
        let mut params = Vec::with_capacity(d);
        let mut transition = vec![vec![None; l]; l];
        let mut emission = vec![vec![None; l_obs]; l];
        for i in 0..l {
            for j in 0..l {
                transition[i][j] = Some(ExponentVector::unit(d, params.len()));
                params.push(format!("t{i}{j}"));
            }
        }
        for i in 0..l {
            for k in 0..l_obs {
                emission[i][k] = Some(ExponentVector::unit(d, params.len()));
                params.push(format!("s{i}{k}"));
            }
        }
        Self { params, transition, emission }
    }
}

fn numbered_symbols(k: usize) -> Vec<String> {
    (0..k).map(|i| i.to_string()).collect()
}

/// Length-`n` homogeneous HMM: edges `X_i → X_{i+1}` and `X_i → Y_i`, with a
/// uniform (zero-exponent) start distribution.
pub fn build_homogeneous_hmm(n: usize, l: usize, l_obs: usize, tables: &HmmTables) -> Result<FactorModel> {
    if n == 0 || l == 0 || l_obs == 0 {
        return Err(Error::InvalidArgument("n, l and l' must be positive".into()));
    }
    let shape_ok = tables.transition.len() == l
        && tables.transition.iter().all(|r| r.len() == l)
        && tables.emission.len() == l
        && tables.emission.iter().all(|r| r.len() == l_obs);
    if !shape_ok {
        return Err(Error::InvalidArgument(format!("tables must be {l}x{l} and {l}x{l_obs}")));
    }
    let mut model = FactorModel::new(
        format!("hmm-n{n}-l{l}-l{l_obs}"),
        tables.params.clone(),
        numbered_symbols(l),
        n,
        numbered_symbols(l_obs),
        n,
    )?;
    for i in 0..n {
        if i > 0 {
            let mut t = Factor::new(vec![i - 1, i], vec![], l, l_obs);
            for a in 0..l {
                for b in 0..l {
                    if let Some(e) = &tables.transition[a][b] {
                        t.set(&[a, b], &[], e.clone());
                    }
                }
            }
            model.push_factor(t)?;
        }
        let mut e = Factor::new(vec![i], vec![i], l, l_obs);
        for a in 0..l {
            for k in 0..l_obs {
                if let Some(x) = &tables.emission[a][k] {
                    e.set(&[a], &[k], x.clone());
                }
            }
        }
        model.push_factor(e)?;
    }
    Ok(model.with_edges(2 * n - 1))
}

/// Hidden-state layout of the lower-bound HMM with `d` parameters.
#[derive(Clone, Copy, Debug)]
pub struct LowerBoundStates {
    pub d: usize,
}

impl LowerBoundStates {
    /// Block starts `s_i` (1-based `i`).
    pub fn s(&self, i: usize) -> usize {
        i - 1
    }
    pub fn c(&self, i: usize) -> usize {
        self.d + 1 + i - 1
    }
    pub fn s_prime(&self, i: usize) -> usize {
        2 * (self.d + 1) + i - 1
    }
    pub fn c_prime(&self, i: usize) -> usize {
        3 * (self.d + 1) + i - 1
    }

    pub fn names(&self) -> Vec<String> {
        let k = self.d + 1;
        let mut out = Vec::with_capacity(4 * k);
        out.extend((1..=k).map(|i| format!("s{i}")));
        out.extend((1..=k).map(|i| format!("c{i}")));
        out.extend((1..=k).map(|i| format!("s'{i}")));
        out.extend((1..=k).map(|i| format!("c'{i}")));
        out
    }

    /// The two block-structured hidden paths for block lengths `a` in a
    /// length-`n` chain: the unprimed path and the primed path.
    pub fn paths(&self, a: &[usize], n: usize) -> (Vec<usize>, Vec<usize>) {
        let mut t = Vec::with_capacity(n);
        let mut tp = Vec::with_capacity(n);
        let mut lengths: Vec<usize> = a.to_vec();
        lengths.push(n - a.iter().sum::<usize>());
        for (blk, &len) in lengths.iter().enumerate() {
            let i = blk + 1;
            t.push(self.s(i));
            tp.push(self.s_prime(i));
            for _ in 1..len {
                t.push(self.c(i));
                tp.push(self.c_prime(i));
            }
        }
        (t, tp)
    }
}

/// Observed symbol indices of the lower-bound HMM.
pub const OBS_START: usize = 0;
pub const OBS_CONTINUE: usize = 1;

/// Block-form observation: `S` at positions `1, a_1+1, …, a_1+⋯+a_d+1`.
pub fn block_observation(a: &[usize], n: usize) -> Vec<usize> {
    let mut tau = vec![OBS_CONTINUE; n];
    let mut pos = 0;
    tau[0] = OBS_START;
    for &ai in a {
        pos += ai;
        if pos < n {
            tau[pos] = OBS_START;
        }
    }
    tau
}

/// HMM of length `n` with `d` parameters, `4d + 4` hidden states and the
/// observed alphabet `{S, C}`, in which a block-form observation has exactly
/// two explanations with monomials `a` and `0`.
pub fn build_lowerbound_hmm(d: usize, n: usize) -> Result<FactorModel> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    if n < d + 2 {
        return Err(Error::InvalidArgument(format!("n must be at least d + 2 = {}", d + 2)));
    }
    let st = LowerBoundStates { d };
    let names = st.names();
    let l = names.len();
    let params = (1..=d).map(|i| format!("theta{i}")).collect();
    let mut model = FactorModel::new(
        format!("lowerbound-d{d}-n{n}"),
        params,
        names,
        n,
        vec!["S".into(), "C".into()],
        n,
    )?;
    let zero = ExponentVector::zeros(d);
    let theta = |i: usize| ExponentVector::unit(d, i - 1);
    let mut trans: Vec<(usize, usize, ExponentVector)> = Vec::new();
    for i in 1..=d {
        trans.push((st.s(i), st.c(i), theta(i)));
        trans.push((st.c(i), st.c(i), theta(i)));
        trans.push((st.c(i), st.s(i + 1), theta(i)));
        // length-one blocks
        trans.push((st.s(i), st.s(i + 1), theta(i)));
        trans.push((st.s_prime(i), st.c_prime(i), zero.clone()));
        trans.push((st.c_prime(i), st.c_prime(i), zero.clone()));
        trans.push((st.c_prime(i), st.s_prime(i + 1), zero.clone()));
        trans.push((st.s_prime(i), st.s_prime(i + 1), zero.clone()));
    }
    let k = d + 1;
    trans.push((st.s(k), st.c(k), zero.clone()));
    trans.push((st.c(k), st.c(k), zero.clone()));
    trans.push((st.s_prime(k), st.c_prime(k), zero.clone()));
    trans.push((st.c_prime(k), st.c_prime(k), zero.clone()));

    for pos in 0..n {
        if pos > 0 {
            let mut f = Factor::new(vec![pos - 1, pos], vec![], l, 2);
            for (from, to, e) in &trans {
                f.set(&[*from, *to], &[], e.clone());
            }
            model.push_factor(f)?;
        }
        let mut f = Factor::new(vec![pos], vec![pos], l, 2);
        for i in 1..=k {
            f.set(&[st.s(i)], &[OBS_START], zero.clone());
            f.set(&[st.s_prime(i)], &[OBS_START], zero.clone());
            f.set(&[st.c(i)], &[OBS_CONTINUE], zero.clone());
            f.set(&[st.c_prime(i)], &[OBS_CONTINUE], zero.clone());
        }
        model.push_factor(f)?;
    }
    Ok(model.with_edges(2 * n - 1))
}

/// Move out of an alignment-grid cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GridMove {
    /// Consume one symbol of each sequence.
    Diagonal,
    /// Consume one symbol of the first sequence against a space.
    Down,
    /// Consume one symbol of the second sequence against a space.
    Right,
    /// Not on the path, or the final cell.
    Stop,
}

impl GridMove {
    pub const ALL: [GridMove; 4] = [GridMove::Diagonal, GridMove::Down, GridMove::Right, GridMove::Stop];

    pub fn symbol(self) -> &'static str {
        match self {
            GridMove::Diagonal => "D",
            GridMove::Down => "B",
            GridMove::Right => "R",
            GridMove::Stop => "X",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Parameter coordinates of the alignment model.
pub const ALIGN_MISMATCH: usize = 0;
pub const ALIGN_SPACE: usize = 1;
pub const ALIGN_MATCH: usize = 2;

/// Pair model for aligning a length-`n1` sequence with a length-`n2` one.
///
/// Hidden variable `(i, j)` (row-major over the `(n1+1)×(n2+1)` grid) holds
/// the move leaving that cell. Each cell's clique factor ties its move to the
/// moves of the three predecessor cells: a cell with no incoming move must
/// be off the path, a cell with one incoming move must continue (or stop at
/// the final cell), and two incoming moves are impossible. The incoming move
/// contributes the monomial `x` (mismatch), `y` (space) or `z` (match). The
/// observed variables are the first sequence followed by the second.
pub fn build_alignment_model(n1: usize, n2: usize, alphabet: &[String]) -> Result<FactorModel> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidArgument("sequence lengths must be positive".into()));
    }
    let symbols: Vec<String> = GridMove::ALL.iter().map(|m| m.symbol().to_string()).collect();
    let mut model = FactorModel::new(
        format!("alignment-{n1}x{n2}"),
        vec!["x".into(), "y".into(), "z".into()],
        symbols,
        (n1 + 1) * (n2 + 1),
        alphabet.to_vec(),
        n1 + n2,
    )?;
    let l_obs = alphabet.len();
    let cell = |i: usize, j: usize| i * (n2 + 1) + j;
    let unit = |k: usize| ExponentVector::unit(3, k);
    let legal = |i: usize, j: usize, m: GridMove| match m {
        GridMove::Diagonal => i < n1 && j < n2,
        GridMove::Down => i < n1,
        GridMove::Right => j < n2,
        GridMove::Stop => true,
    };
    for i in 0..=n1 {
        for j in 0..=n2 {
            // predecessor slots: diagonal, from above (Down), from left (Right)
            let mut preds: Vec<(usize, GridMove)> = Vec::new();
            if i > 0 && j > 0 {
                preds.push((cell(i - 1, j - 1), GridMove::Diagonal));
            }
            if i > 0 {
                preds.push((cell(i - 1, j), GridMove::Down));
            }
            if j > 0 {
                preds.push((cell(i, j - 1), GridMove::Right));
            }
            let mut scope: Vec<usize> = preds.iter().map(|p| p.0).collect();
            scope.push(cell(i, j));
            let observed = if i > 0 && j > 0 { vec![i - 1, n1 + j - 1] } else { vec![] };
            let mut f = Factor::new(scope, observed.clone(), 4, l_obs);
            let obs_assignments: Vec<Vec<usize>> = if observed.is_empty() {
                vec![vec![]]
            } else {
                (0..l_obs).flat_map(|a| (0..l_obs).map(move |b| vec![a, b])).collect()
            };
            let slots = preds.len();
            for code in 0..4usize.pow(slots as u32 + 1) {
                let mut digits = vec![0usize; slots + 1];
                let mut c = code;
                for k in (0..=slots).rev() {
                    digits[k] = c % 4;
                    c /= 4;
                }
                let own = GridMove::ALL[digits[slots]];
                let incoming: Vec<GridMove> = (0..slots)
                    .filter(|&k| GridMove::ALL[digits[k]] == preds[k].1)
                    .map(|k| preds[k].1)
                    .collect();
                let is_origin = i == 0 && j == 0;
                let is_end = i == n1 && j == n2;
                let on_path = is_origin || incoming.len() == 1;
                if incoming.len() > 1 || (is_end && !on_path) {
                    continue;
                }
                let own_ok = if !on_path || is_end {
                    own == GridMove::Stop
                } else {
                    own != GridMove::Stop && legal(i, j, own)
                };
                if !own_ok {
                    continue;
                }
                for obs in &obs_assignments {
                    let mono = match incoming.first() {
                        None => ExponentVector::zeros(3),
                        Some(GridMove::Diagonal) => {
                            if obs[0] == obs[1] {
                                unit(ALIGN_MATCH)
                            } else {
                                unit(ALIGN_MISMATCH)
                            }
                        }
                        Some(_) => unit(ALIGN_SPACE),
                    };
                    let hidden: Vec<usize> = digits.clone();
                    f.set(&hidden, obs, mono);
                }
            }
            model.push_factor(f)?;
        }
    }
    Ok(model)
}

/// Hidden assignment of the alignment model encoding a path given as a
/// move sequence from the origin.
pub fn alignment_path_assignment(n1: usize, n2: usize, moves: &[GridMove]) -> Result<Vec<usize>> {
    let mut h = vec![GridMove::Stop.index(); (n1 + 1) * (n2 + 1)];
    let (mut i, mut j) = (0, 0);
    for &m in moves {
        h[i * (n2 + 1) + j] = m.index();
        match m {
            GridMove::Diagonal => {
                i += 1;
                j += 1;
            }
            GridMove::Down => i += 1,
            GridMove::Right => j += 1,
            GridMove::Stop => return Err(Error::InvalidArgument("stop move inside a path".into())),
        }
        if i > n1 || j > n2 {
            return Err(Error::InvalidArgument("path leaves the grid".into()));
        }
    }
    if (i, j) != (n1, n2) {
        return Err(Error::InvalidArgument("path does not reach the final cell".into()));
    }
    Ok(h)
}
