use super::{subset_indices, validate, Field, LinearStratification, Subset};

/// Set partitions of `items`, blocks in order of first element.
fn set_partitions(items: &[Subset]) -> Vec<Vec<Vec<Subset>>> {
    fn rec(k: usize, items: &[Subset], blocks: &mut Vec<Vec<Subset>>, out: &mut Vec<Vec<Vec<Subset>>>) {
        if k == items.len() {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(items[k]);
            rec(k + 1, items, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![items[k]]);
        rec(k + 1, items, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(0, items, &mut Vec::new(), &mut out);
    out
}

/// Every valid stratification of K^m, in a fixed order.
///
/// Classes never mix sizes, so each size level is partitioned on its own;
/// the product of those partitions is filtered by the frontier condition.
pub fn all_stratifications(m: usize, field: Field) -> Vec<LinearStratification> {
    let levels: Vec<Vec<Vec<Vec<Subset>>>> = (0..=m)
        .map(|k| {
            let mut members: Vec<Subset> = (0..(1u64 << m)).filter(|s| s.count_ones() as usize == k).collect();
            members.sort_by_key(|&s| subset_indices(s));
            set_partitions(&members)
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; m + 1];
    loop {
        let classes: Vec<Vec<Subset>> = (0..=m).flat_map(|k| levels[k][choice[k]].iter().cloned()).collect();
        if validate(m, &classes, None).valid {
            out.push(LinearStratification::from_checked(m, field, classes));
        }
        let mut k = 0;
        loop {
            if k > m {
                return out;
            }
            choice[k] += 1;
            if choice[k] < levels[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}
