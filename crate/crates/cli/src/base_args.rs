use aclab::BaseSpec;
use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Explicit,
    Uniform,
    Thm11,
    Thm12,
    Lemma22,
}

/// Flags describing a base sequence.
#[derive(Debug, Clone, Default, Args)]
pub struct BaseArgs {
    /// Construction family.
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// `a` for lemma22.
    #[arg(long)]
    pub a: Option<u64>,
    /// `b` for lemma22, or the term list for explicit.
    #[arg(long, value_delimiter = ',')]
    pub b: Vec<u64>,
    /// Period length for lemma22.
    #[arg(long)]
    pub l: Option<u64>,
    /// Block terminator for thm12.
    #[arg(long)]
    pub c: Option<u64>,
    /// Block alphabet for thm12.
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<u64>,
    /// Constant term for uniform.
    #[arg(long)]
    pub value: Option<u64>,
    /// Base as JSON, e.g. '{"kind":"uniform","value":2}'.
    #[arg(long, conflicts_with = "kind")]
    pub spec: Option<String>,
}

fn need<T: Copy>(v: Option<T>, flag: &str, kind: &str) -> Result<T> {
    v.with_context(|| format!("--kind {kind} requires --{flag}"))
}

impl BaseArgs {
    pub fn given(&self) -> bool {
        self.kind.is_some() || self.spec.is_some()
    }

    pub fn to_spec(&self) -> Result<BaseSpec> {
        if let Some(json) = &self.spec {
            return serde_json::from_str(json).context("invalid --spec JSON");
        }
        let Some(kind) = self.kind else {
            bail!("a base is required: pass --kind or --spec");
        };
        let spec = match kind {
            Kind::Explicit => {
                if self.b.is_empty() {
                    bail!("--kind explicit requires --b");
                }
                BaseSpec::Explicit { b: self.b.clone() }
            }
            Kind::Uniform => BaseSpec::Uniform { value: need(self.value, "value", "uniform")? },
            Kind::Thm11 => BaseSpec::Thm11,
            Kind::Thm12 => {
                if self.d.is_empty() {
                    bail!("--kind thm12 requires --d");
                }
                BaseSpec::Thm12 { d: self.d.clone(), c: need(self.c, "c", "thm12")? }
            }
            Kind::Lemma22 => {
                let b = match self.b.as_slice() {
                    [b] => *b,
                    [] => bail!("--kind lemma22 requires --b"),
                    _ => bail!("--kind lemma22 takes a single --b"),
                };
                BaseSpec::Lemma22 { a: need(self.a, "a", "lemma22")?, b, l: need(self.l, "l", "lemma22")? }
            }
        };
        Ok(spec)
    }
}
