//! JSON form documents.
//!
//! ```json
//! {"n": 2, "center": ["0/1", "0/1"], "metric": [1, 1],
//!  "components": {"1": {"[2]": [{"exp": [1, 0], "coef": "-1/3"}]}}}
//! ```
//!
//! Index lists are 1-based, coefficients are `p/q` strings and exponents
//! refer to absolute coordinates.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{Blade, Form};
use crate::polyring::{format_rational_pq, parse_rational, Context, Multidegree, Poly};
use crate::solvers::SolveReport;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub exp: Vec<u16>,
    pub coef: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonForm {
    pub n: usize,
    pub center: Vec<String>,
    pub metric: Vec<i8>,
    pub components: IndexMap<String, IndexMap<String, Vec<JsonTerm>>>,
}

fn index_key(b: Blade) -> String {
    let idx: Vec<String> = b.axes().map(|a| (a + 1).to_string()).collect();
    format!("[{}]", idx.join(","))
}

fn parse_index_key(key: &str, n: usize) -> Result<Vec<usize>> {
    let inner = key
        .trim()
        .strip_prefix('[')
        .and_then(|k| k.strip_suffix(']'))
        .ok_or_else(|| Error::Json(format!("index list `{key}` must look like [i,j,...]")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| {
            let i: usize = t
                .trim()
                .parse()
                .map_err(|_| Error::Json(format!("bad index `{t}` in `{key}`")))?;
            if i == 0 || i > n {
                return Err(Error::AxisOutOfRange { axis: i, dim: n });
            }
            Ok(i - 1)
        })
        .collect()
}

impl JsonForm {
    pub fn from_form(form: &Form, ctx: &Context) -> Self {
        let mut components: IndexMap<String, IndexMap<String, Vec<JsonTerm>>> = IndexMap::new();
        for (b, p) in form.components() {
            let terms = ctx
                .to_absolute(p)
                .terms()
                .map(|(m, c)| JsonTerm {
                    exp: m.exponents().to_vec(),
                    coef: format_rational_pq(c),
                })
                .collect();
            components
                .entry(b.grade().to_string())
                .or_default()
                .insert(index_key(b), terms);
        }
        JsonForm {
            n: ctx.dim(),
            center: ctx.center().iter().map(format_rational_pq).collect(),
            metric: ctx.signature().to_vec(),
            components,
        }
    }

    pub fn context(&self) -> Result<Context> {
        if self.center.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: self.center.len(),
            });
        }
        if self.metric.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: self.metric.len(),
            });
        }
        let center = self.center.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>()?;
        Context::new(center, self.metric.clone())
    }

    /// The context from the header together with the (centered) form.
    pub fn to_form(&self) -> Result<(Context, Form)> {
        let ctx = self.context()?;
        let n = self.n;
        let mut out = Form::zero(n);
        for (grade, blades) in &self.components {
            let grade: usize = grade
                .parse()
                .map_err(|_| Error::Json(format!("grade key `{grade}` is not an integer")))?;
            for (key, terms) in blades {
                let axes = parse_index_key(key, n)?;
                if axes.len() != grade {
                    return Err(Error::Json(format!("index list {key} listed under grade {grade}")));
                }
                let (blade, sign) =
                    Blade::from_axes(&axes).ok_or_else(|| Error::Json(format!("repeated index in {key}")))?;
                let mut poly = Poly::zero(n);
                for t in terms {
                    if t.exp.len() != n {
                        return Err(Error::DimensionMismatch {
                            expected: n,
                            found: t.exp.len(),
                        });
                    }
                    let c = parse_rational(&t.coef)?;
                    poly = &poly + &Poly::monomial(n, Multidegree::from_slice(&t.exp), c);
                }
                if sign < 0 {
                    poly = -poly;
                }
                out = &out + &Form::term(blade, ctx.from_absolute(&poly));
            }
        }
        Ok((ctx, out))
    }
}

pub fn form_to_json(form: &Form, ctx: &Context) -> String {
    serde_json::to_string_pretty(&JsonForm::from_form(form, ctx)).expect("serializable")
}

pub fn form_from_json(text: &str) -> Result<(Context, Form)> {
    let doc: JsonForm = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    doc.to_form()
}

#[derive(Clone, Debug, Serialize)]
pub struct JsonReport {
    pub problem: String,
    pub success: bool,
    pub failing: Vec<String>,
    pub outputs: IndexMap<String, JsonForm>,
    pub residuals: IndexMap<String, JsonForm>,
    pub gauge_notes: Vec<String>,
}

impl JsonReport {
    pub fn from_report(report: &SolveReport, ctx: &Context) -> Self {
        let conv = |v: &[(String, Form)]| {
            v.iter()
                .map(|(k, f)| (k.clone(), JsonForm::from_form(f, ctx)))
                .collect::<IndexMap<_, _>>()
        };
        JsonReport {
            problem: report.problem.clone(),
            success: report.success(),
            failing: report.failing(),
            outputs: conv(&report.outputs),
            residuals: conv(&report.residuals),
            gauge_notes: report.gauge_notes.clone(),
        }
    }
}

pub fn report_to_json(report: &SolveReport, ctx: &Context) -> String {
    serde_json::to_string_pretty(&JsonReport::from_report(report, ctx)).expect("serializable")
}
