//! Products and coproducts as graded linear maps. The coproducts `Δ_*`
//! and `Δ_▷` are, by construction, the transposes of `*` and `▷`.

use crate::algebra::{AlgebraContext, Coproduct, Product};
use crate::linalg::{BasisKey, Grade, GradedLinearMap, LinearBlock};

/// Matrix of a product, one block per bigrade `(i, j) → i + j ≤ order`.
pub fn product_map(ctx: &AlgebraContext, p: Product, order: usize) -> GradedLinearMap {
    let mut m = GradedLinearMap::new();
    for n in 0..=order {
        for i in 0..=n {
            let mut block = LinearBlock::new(Grade::Pair(i, n - i), Grade::Single(n));
            for u in ctx.forests(i) {
                for v in ctx.forests(n - i) {
                    for (f, q) in ctx.product_basis(p, u, v).iter() {
                        block.add_entry(
                            BasisKey::Forest(f.clone()),
                            BasisKey::Tensor(u.clone(), v.clone()),
                            q.clone(),
                        );
                    }
                }
            }
            m.insert(block);
        }
    }
    m
}

/// Matrix of a coproduct, one block per grade `n → (i, n − i)`.
pub fn coproduct_map(ctx: &AlgebraContext, c: Coproduct, order: usize) -> GradedLinearMap {
    let mut m = GradedLinearMap::new();
    for n in 0..=order {
        let mut blocks: Vec<LinearBlock> = (0..=n)
            .map(|i| LinearBlock::new(Grade::Single(n), Grade::Pair(i, n - i)))
            .collect();
        for w in ctx.forests(n) {
            for (l, r, q) in ctx.coproduct_basis(c, w).iter() {
                blocks[l.grade()].add_entry(
                    BasisKey::Tensor(l.clone(), r.clone()),
                    BasisKey::Forest(w.clone()),
                    q.clone(),
                );
            }
        }
        for b in blocks {
            m.insert(b);
        }
    }
    m
}
