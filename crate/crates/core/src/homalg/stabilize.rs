use std::collections::BTreeMap;

use serde::Serialize;

use super::bar::ext_bar;
use super::resolution::ext_free;
use crate::error::{Error, Result};
use crate::graded::GradedModuleWindow;
use crate::ingest::{ideal_submodule, module_from_presentation, CoordinateRing, ModulePresentation, Polynomial};

/// A module that can be re-stored on any window `[low, high]` of its degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleSpec {
    Presented { generator_degrees: Vec<i64>, relations: Vec<Vec<Polynomial>> },
    /// The ideal `(gens)` as a module.
    Ideal(Vec<Polynomial>),
    /// `A / (gens)`.
    Quotient(Vec<Polynomial>),
}

impl ModuleSpec {
    /// The algebra itself.
    pub fn free() -> Self {
        ModuleSpec::Presented { generator_degrees: vec![0], relations: vec![] }
    }

    pub fn build(&self, ring: &CoordinateRing, low: i64, high: i64) -> Result<GradedModuleWindow> {
        if low > high {
            return Ok(GradedModuleWindow::zero(ring.algebra().clone()));
        }
        match self {
            ModuleSpec::Presented { generator_degrees, relations } => {
                let mp = ModulePresentation {
                    generator_degrees: generator_degrees.clone(),
                    relations: relations.clone(),
                    low,
                    high,
                };
                module_from_presentation(ring, &mp)
            }
            ModuleSpec::Ideal(gens) => ideal_submodule(ring, gens, low, high)?.induced_module(),
            ModuleSpec::Quotient(gens) => Ok(ideal_submodule(ring, gens, low, high)?.quotient()?.module),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct StabilizationReport {
    /// `table[q][i] = dim Ext^{i,0}(M_{[p_M,q]}, N_{[p_N,q]})`.
    pub table: BTreeMap<i64, Vec<usize>>,
    /// First `q` whose row equals the next one.
    pub q0: Option<i64>,
    pub cap: i64,
    /// `Ext^{i,0}(M_{[q+1, q+1+w]}, N_{[p_N,q]})` for each tested `q`; all entries should be 0.
    pub upper_part: BTreeMap<i64, Vec<usize>>,
    /// `Ext^{i,0}(A_{[0,q]}, N_{[p_N,q]})` for `i >= 1`; all entries should be 0.
    pub free_part: BTreeMap<i64, Vec<usize>>,
    /// Whether the free-resolution oracle reproduced every table entry.
    pub oracle_agrees: bool,
}

impl StabilizationReport {
    pub fn vanishing_holds(&self) -> bool {
        self.upper_part.values().chain(self.free_part.values()).all(|r| r.iter().all(|d| *d == 0))
    }
}

/// Scans `q = q_start, q_start + 1, ..` up to `cap` for the first window past which the
/// truncated Ext groups stop changing. `width` is the size of the upper windows used for the
/// vanishing check. The ring must be truncated at least at `cap + 1 + width`.
pub fn stabilization_bound(
    ring: &CoordinateRing,
    m: &ModuleSpec,
    p_m: i64,
    n: &ModuleSpec,
    p_n: i64,
    i_max: usize,
    q_start: i64,
    cap: i64,
    width: i64,
) -> Result<StabilizationReport> {
    let need = cap + 1 + width - p_m.min(p_n).min(0);
    if (ring.max_degree() as i64) < need {
        return Err(Error::WindowTooShort { degree: need });
    }
    let free = ModuleSpec::free();
    let mut report = StabilizationReport {
        table: BTreeMap::new(),
        q0: None,
        cap,
        upper_part: BTreeMap::new(),
        free_part: BTreeMap::new(),
        oracle_agrees: true,
    };
    for q in q_start..=cap {
        let mq = m.build(ring, p_m, q)?;
        let nq = n.build(ring, p_n, q)?;
        let mut row = Vec::with_capacity(i_max + 1);
        for i in 0..=i_max {
            let d = ext_bar(&mq, &nq, i)?.dim;
            if ext_free(&mq, &nq, i)? != d {
                report.oracle_agrees = false;
            }
            row.push(d);
        }
        report.table.insert(q, row);

        let upper = m.build(ring, q + 1, q + 1 + width)?;
        report.upper_part.insert(q, (0..=i_max).map(|i| Ok(ext_bar(&upper, &nq, i)?.dim)).collect::<Result<_>>()?);
        let fq = free.build(ring, 0, q)?;
        report.free_part.insert(q, (1..=i_max).map(|i| Ok(ext_bar(&fq, &nq, i)?.dim)).collect::<Result<_>>()?);

        if report.q0.is_none() && q > q_start && report.table[&(q - 1)] == report.table[&q] {
            report.q0 = Some(q - 1);
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::IdealPresentation;

    #[test]
    fn free_plane_stabilizes_at_once() {
        let ring = CoordinateRing::new(&IdealPresentation::new(2, vec![], 8).unwrap()).unwrap();
        let a = ModuleSpec::free();
        let r = stabilization_bound(&ring, &a, 0, &a, 0, 2, 1, 5, 2).unwrap();
        assert_eq!(r.q0, Some(1));
        assert_eq!(r.table[&1], vec![1, 0, 0]);
        assert!(r.vanishing_holds());
        assert!(r.oracle_agrees);
    }
}
