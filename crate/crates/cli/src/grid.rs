//! Grid specifications: `p in {13,37}, l in {3,5}, N in {1,2,3,6}`.

use ssgraph_core::check_admissible;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub ps: Vec<u64>,
    pub ls: Vec<u64>,
    pub ns: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Job {
    pub p: u64,
    pub l: u64,
    pub n: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skip {
    pub job: Job,
    pub reason: String,
}

pub fn parse_grid(spec: &str) -> Result<Grid, String> {
    let mut ps = None;
    let mut ls = None;
    let mut ns = None;
    let mut rest = spec.trim();
    while !rest.is_empty() {
        let open = rest.find('{').ok_or_else(|| format!("expected '{{' in {rest:?}"))?;
        let close = rest.find('}').ok_or_else(|| format!("unclosed '{{' in {rest:?}"))?;
        let head: Vec<&str> = rest[..open].split_whitespace().collect();
        let [name, "in"] = head[..] else {
            return Err(format!("expected `<name> in {{...}}`, got {:?}", &rest[..open]));
        };
        let values = rest[open + 1..close]
            .split(',')
            .map(|v| v.trim().parse::<u64>().map_err(|_| format!("bad value {v:?} for {name}")))
            .collect::<Result<Vec<_>, _>>()?;
        let slot = match name {
            "p" => &mut ps,
            "l" => &mut ls,
            "N" | "n" => &mut ns,
            _ => return Err(format!("unknown grid variable {name:?}")),
        };
        if slot.replace(values).is_some() {
            return Err(format!("{name} given twice"));
        }
        rest = rest[close + 1..].trim_start().trim_start_matches(',').trim_start();
    }
    Ok(Grid {
        ps: ps.ok_or("grid needs p")?,
        ls: ls.ok_or("grid needs l")?,
        ns: ns.unwrap_or_else(|| vec![1]),
    })
}

impl Grid {
    /// Admissible jobs in lexicographic order, and the rest as skips.
    pub fn jobs(&self) -> (Vec<Job>, Vec<Skip>) {
        let mut jobs = Vec::new();
        let mut skips = Vec::new();
        for &p in &self.ps {
            for &l in &self.ls {
                for &n in &self.ns {
                    let job = Job { p, l, n };
                    match check_admissible(p, l, n) {
                        Ok(()) => jobs.push(job),
                        Err(e) => skips.push(Skip {
                            job,
                            reason: e.to_string(),
                        }),
                    }
                }
            }
        }
        (jobs, skips)
    }
}
