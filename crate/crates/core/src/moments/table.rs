use std::fmt;
use std::io::Write;

use num_rational::BigRational;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::Result;
use crate::scalar::{format_rational, ratio_to_f64};

/// A model parameter, exact when supplied as a rational.
#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Real(f64),
    Exact(BigRational),
    /// Index set, e.g. the queried rays of a spider.
    Indices(Vec<usize>),
}

impl Param {
    pub fn to_f64(&self) -> f64 {
        match self {
            Param::Real(v) => *v,
            Param::Exact(r) => ratio_to_f64(r),
            Param::Indices(_) => f64::NAN,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Param::Exact(r) => Some(r),
            _ => None,
        }
    }
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::Real(v)
    }
}

impl From<BigRational> for Param {
    fn from(r: BigRational) -> Self {
        Param::Exact(r)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Real(v) => write!(f, "{}", format_f64(*v)),
            Param::Exact(r) => write!(f, "{}", format_rational(r)),
            Param::Indices(v) => {
                let parts: Vec<String> = v.iter().map(|i| i.to_string()).collect();
                write!(f, "{}", parts.join(";"))
            }
        }
    }
}

impl Serialize for Param {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Param::Real(v) => s.serialize_f64(*v),
            Param::Exact(r) => s.serialize_str(&format_rational(r)),
            Param::Indices(v) => v.serialize(s),
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Recursion,
    ClosedForm,
    Quadrature,
    MonteCarlo,
    LaplaceInversion,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Recursion => "recursion",
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte_carlo",
            Method::LaplaceInversion => "laplace_inversion",
        };
        f.write_str(s)
    }
}

/// Whether the values are time-domain moments `E_0(A_1^n)` or the
/// Laplace-domain functionals `U_n(λ) = λ^{n+1} Â_0(λ; n) / n!`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentDomain {
    Time,
    Laplace,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MomentValues {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

impl MomentValues {
    pub fn len(&self) -> usize {
        match self {
            MomentValues::Exact(v) => v.len(),
            MomentValues::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            MomentValues::Exact(v) => v.iter().map(ratio_to_f64).collect(),
            MomentValues::Float(v) => v.clone(),
        }
    }

    /// Value at 0-based index `i`: `p/q` when exact, 17 significant digits otherwise.
    pub fn render(&self, i: usize) -> String {
        match self {
            MomentValues::Exact(v) => format_rational(&v[i]),
            MomentValues::Float(v) => format_f64(v[i]),
        }
    }
}

/// Moment sequence `n = 1..=max_order` with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    pub diffusion: String,
    pub params: Vec<(String, Param)>,
    pub values: MomentValues,
    pub method: Method,
    pub domain: MomentDomain,
    pub lambda: Option<f64>,
    /// Set when a boundary parameter (β ∈ {0, 1}) produced a constant table.
    pub degenerate: bool,
    pub std_errors: Option<Vec<f64>>,
}

impl MomentTable {
    pub(crate) fn new(diffusion: &str, params: Vec<(&str, Param)>, values: MomentValues, method: Method) -> Self {
        MomentTable {
            diffusion: diffusion.to_string(),
            params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            values,
            method,
            domain: MomentDomain::Time,
            lambda: None,
            degenerate: false,
            std_errors: None,
        }
    }

    pub fn max_order(&self) -> usize {
        self.values.len()
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, MomentValues::Exact(_))
    }

    /// Value at order `n` (1-based) as `f64`.
    pub fn value(&self, n: usize) -> f64 {
        match &self.values {
            MomentValues::Exact(v) => ratio_to_f64(&v[n - 1]),
            MomentValues::Float(v) => v[n - 1],
        }
    }

    pub fn exact(&self, n: usize) -> Option<&BigRational> {
        match &self.values {
            MomentValues::Exact(v) => v.get(n - 1),
            MomentValues::Float(_) => None,
        }
    }

    pub fn values_f64(&self) -> Vec<f64> {
        self.values.to_f64()
    }

    /// `0 < v_{n+1} <= v_n <= 1`, up to `tol` on floating tables.
    pub fn bounds_hold(&self, tol: f64) -> bool {
        if self.degenerate {
            return true;
        }
        let v = self.values_f64();
        v.iter().all(|&x| x > 0.0 && x <= 1.0 + tol) && v.windows(2).all(|w| w[1] <= w[0] + tol)
    }

    /// Hausdorff condition: every alternating finite difference
    /// `(-1)^k Δ^k c_m` of `c = (1, v_1, v_2, …)` is nonnegative. Exact tables
    /// are checked exactly; floating tables allow `tol · 2^k` of roundoff.
    pub fn hausdorff_holds(&self, tol: f64) -> bool {
        match &self.values {
            MomentValues::Exact(v) => {
                let mut row: Vec<BigRational> = std::iter::once(num_traits::One::one()).chain(v.iter().cloned()).collect();
                while row.len() > 1 {
                    row = row.windows(2).map(|w| w[0].clone() - w[1].clone()).collect();
                    if row.iter().any(|x| x < &num_traits::Zero::zero()) {
                        return false;
                    }
                }
                true
            }
            MomentValues::Float(v) => {
                let mut row: Vec<f64> = std::iter::once(1.0).chain(v.iter().copied()).collect();
                let mut slack = tol;
                while row.len() > 1 {
                    slack *= 2.0;
                    row = row.windows(2).map(|w| w[0] - w[1]).collect();
                    if row.iter().any(|&x| x < -slack) {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// CSV with header `n,value,method,domain,lambda[,std_error],<params…>`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let mut header = vec!["n".to_string(), "value".into(), "method".into(), "domain".into(), "lambda".into()];
        if self.std_errors.is_some() {
            header.push("std_error".into());
        }
        header.extend(self.params.iter().map(|(k, _)| k.clone()));
        wr.write_record(&header)?;
        for i in 0..self.values.len() {
            let mut rec = vec![
                (i + 1).to_string(),
                self.values.render(i),
                self.method.to_string(),
                domain_str(self.domain).to_string(),
                self.lambda.map(format_f64).unwrap_or_default(),
            ];
            if let Some(se) = &self.std_errors {
                rec.push(format_f64(se[i]));
            }
            rec.extend(self.params.iter().map(|(_, v)| v.to_string()));
            wr.write_record(&rec)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<serde_json::Value> {
        Ok(serde_json::to_value(self)?)
    }
}

fn domain_str(d: MomentDomain) -> &'static str {
    match d {
        MomentDomain::Time => "time",
        MomentDomain::Laplace => "laplace",
    }
}

struct ParamMap<'a>(&'a [(String, Param)]);

impl Serialize for ParamMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl Serialize for MomentTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("diffusion", &self.diffusion)?;
        m.serialize_entry("params", &ParamMap(&self.params))?;
        m.serialize_entry("max_order", &self.max_order())?;
        m.serialize_entry("method", &self.method)?;
        m.serialize_entry("domain", &self.domain)?;
        m.serialize_entry("lambda", &self.lambda)?;
        m.serialize_entry("exact", &self.is_exact())?;
        m.serialize_entry("degenerate", &self.degenerate)?;
        match &self.values {
            MomentValues::Exact(v) => {
                let s: Vec<String> = v.iter().map(format_rational).collect();
                m.serialize_entry("values", &s)?;
            }
            MomentValues::Float(v) => m.serialize_entry("values", v)?,
        }
        if let Some(se) = &self.std_errors {
            m.serialize_entry("std_errors", se)?;
        }
        m.end()
    }
}
