//! Embeddings F_{p^s} → F_{p^n} for s | n.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::{FieldDescriptor, FieldElement, FieldError};
use crate::poly::Poly;

/// A fixed field homomorphism, determined by the image of the generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    src: FieldDescriptor,
    dst: FieldDescriptor,
    /// Image of X, or `None` when the source is the prime field.
    root: Option<FieldElement>,
}

type CacheKey = (u64, Vec<u64>, Vec<u64>);

fn embed_cache() -> &'static Mutex<HashMap<CacheKey, Embedding>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Embedding>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Embedding {
    /// Looks up (or computes and caches) the embedding `src → dst`.
    pub fn new(src: &FieldDescriptor, dst: &FieldDescriptor) -> Result<Self, FieldError> {
        if src.characteristic() != dst.characteristic() || dst.degree() % src.degree() != 0 {
            return Err(FieldError::IncompatibleTower {
                src_p: src.characteristic(),
                src_n: src.degree(),
                dst_p: dst.characteristic(),
                dst_n: dst.degree(),
            });
        }
        if src.degree() == 1 {
            return Ok(Embedding {
                src: src.clone(),
                dst: dst.clone(),
                root: None,
            });
        }
        let key = (
            src.characteristic(),
            src.modulus().to_vec(),
            dst.modulus().to_vec(),
        );
        if let Some(e) = embed_cache().lock().expect("embed cache").get(&key) {
            return Ok(e.clone());
        }
        let g = Poly::from_u64s(dst, src.modulus());
        let mut roots = split_roots(&g);
        roots.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
        let root = roots.into_iter().next().expect("modulus splits in the larger field");
        let e = Embedding {
            src: src.clone(),
            dst: dst.clone(),
            root: Some(root),
        };
        embed_cache()
            .lock()
            .expect("embed cache")
            .insert(key, e.clone());
        Ok(e)
    }

    pub fn source(&self) -> &FieldDescriptor {
        &self.src
    }

    pub fn target(&self) -> &FieldDescriptor {
        &self.dst
    }

    pub fn apply(&self, a: &FieldElement) -> FieldElement {
        debug_assert!(a.field() == &self.src);
        match &self.root {
            None => self.dst.from_u64(a.coeffs()[0]),
            Some(r) => {
                let mut acc = self.dst.zero();
                for &c in a.coeffs().iter().rev() {
                    acc = &(&acc * r) + &self.dst.from_u64(c);
                }
                acc
            }
        }
    }
}

/// Image of `a` in `dst` under the canonical cached embedding.
pub fn embed(a: &FieldElement, dst: &FieldDescriptor) -> Result<FieldElement, FieldError> {
    Ok(Embedding::new(a.field(), dst)?.apply(a))
}

/// All roots of a squarefree polynomial that splits into linear factors.
fn split_roots(g: &Poly) -> Vec<FieldElement> {
    let field = g.field().clone();
    let half = field.unit_group_order() >> 1u32;
    let mut pending = vec![g.monic()];
    let mut roots = Vec::new();
    // Translates from F_p cannot separate Frobenius-conjugate roots, so start past them.
    let mut idx = field.characteristic();
    while let Some(h) = pending.pop() {
        match h.degree() {
            None | Some(0) => continue,
            Some(1) => {
                roots.push(-&h.coeff(0));
                continue;
            }
            _ => {}
        }
        loop {
            let c = field.element_from_index(idx);
            idx += 1;
            let shifted = Poly::from_coeffs(&field, vec![c, field.one()]);
            let w = shifted
                .pow_mod(&half, &h)
                .sub(&Poly::one(&field));
            let d = h.gcd(&w);
            let dd = d.degree().unwrap_or(0);
            if dd > 0 && dd < h.degree().unwrap() {
                pending.push(h.div_exact(&d));
                pending.push(d);
                break;
            }
        }
    }
    roots
}
