use super::{ConfigSpace, Genotype, RefinementState};

/// Hierarchical repair with Lamarckian write-back.
///
/// Out-of-range genes are clipped to the current cardinality (which, for
/// continuous dimensions, keeps values inside the declared range). Newly
/// inactive dimensions are frozen: their last valid gene is cached and kept
/// as placeholder. Re-activated dimensions get the cached gene back.
pub fn repair(g: &Genotype, space: &ConfigSpace, refine: &RefinementState) -> Genotype {
    let mut out = g.clone();
    repair_in_place(&mut out, space, refine);
    out
}

pub fn repair_in_place(g: &mut Genotype, space: &ConfigSpace, refine: &RefinementState) {
    debug_assert_eq!(g.len(), space.dims());
    let mut active = vec![true; space.dims()];
    for j in 0..space.dims() {
        let last = refine.cardinality(j) - 1;
        let gene = g.gene(j).min(last);
        g.set_gene(j, gene);
        if let Some(p) = space.parent_of(j) {
            active[j] = active[p] && space.activates(j, g.gene(p));
        }
        let cached = g.frozen()[j];
        if active[j] {
            if let Some(c) = cached {
                g.set_gene(j, c.min(last));
                g.frozen_mut()[j] = None;
            }
        } else {
            let c = cached.unwrap_or(gene).min(last);
            g.frozen_mut()[j] = Some(c);
            g.set_gene(j, c);
        }
    }
}
