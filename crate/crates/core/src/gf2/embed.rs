//! Cached, mutually compatible embeddings F_{2^e} → F_{2^d} for e | d.
//!
//! The embedding e → d sends the generator of F_{2^e} to the numerically smallest root
//! r of the degree-e modulus in F_{2^d} that agrees with the already fixed embeddings
//! k → e and k → d on every intermediate subfield k. Building the lattice this way
//! makes `embed(embed(a, mid), top) == embed(a, top)` hold by construction.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{roots::distinct_roots, FieldContext, FieldElement, FieldError, Poly};
use crate::arith::divisors;

pub struct Embedding {
    source: &'static FieldContext,
    target: &'static FieldContext,
    /// images of 1, g, g², … of the source power basis
    images: Vec<u128>,
    /// pivoted (image, preimage) pairs for inverting the map on its image
    pivots: Vec<(u128, u128)>,
}

type Cache = Mutex<HashMap<(u32, u32), Arc<Embedding>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Embedding {
    /// The fixed embedding F_{2^from} → F_{2^to}.
    pub fn get(from: u32, to: u32) -> Result<Arc<Embedding>, FieldError> {
        let source = FieldContext::get(from)?;
        let target = FieldContext::get(to)?;
        if !to.is_multiple_of(from) {
            return Err(FieldError::NotDivisible { from, to });
        }
        if let Some(e) = cache().lock().expect("embedding cache poisoned").get(&(from, to)) {
            return Ok(e.clone());
        }
        let built = Arc::new(Self::build(source, target)?);
        let mut guard = cache().lock().expect("embedding cache poisoned");
        Ok(guard.entry((from, to)).or_insert(built).clone())
    }

    fn build(
        source: &'static FieldContext,
        target: &'static FieldContext,
    ) -> Result<Embedding, FieldError> {
        let (e, d) = (source.degree(), target.degree());
        let root = if e == d {
            source.generator().bits()
        } else if e == 1 {
            1
        } else {
            let mut constraints = Vec::new();
            for k in divisors(e as u64) {
                let k = k as u32;
                if k == 1 || k == e {
                    continue;
                }
                let inner = Embedding::get(k, e)?;
                let outer = Embedding::get(k, d)?;
                let gk = FieldContext::of(k).generator();
                constraints.push((inner.apply(&gk), outer.apply(&gk)));
            }
            let modulus = Poly::from_gf2(target, source.modulus());
            distinct_roots(&modulus)?
                .into_iter()
                .find(|&r| {
                    constraints.iter().all(|(in_src, in_tgt)| {
                        // evaluate the source-field polynomial of in_src at r
                        let mut acc = target.zero();
                        let mut pow = target.one();
                        for i in 0..e {
                            if in_src.bits() >> i & 1 == 1 {
                                acc += pow;
                            }
                            pow *= r;
                        }
                        acc == *in_tgt
                    })
                })
                .expect("a compatible root always exists")
                .bits()
        };
        let r = target.element(root);
        let mut images = Vec::with_capacity(e as usize);
        let mut pow = target.one();
        for _ in 0..e {
            images.push(pow.bits());
            pow *= r;
        }
        let mut pivots: Vec<(u128, u128)> = Vec::new();
        for (i, &img) in images.iter().enumerate() {
            let (mut img, mut pre) = (img, 1u128 << i);
            for &(pi, pp) in &pivots {
                if img >> (127 - pi.leading_zeros()) & 1 == 1 {
                    img ^= pi;
                    pre ^= pp;
                }
            }
            assert!(img != 0, "embedding images must be linearly independent");
            let pos = pivots
                .iter()
                .position(|&(pi, _)| pi.leading_zeros() > img.leading_zeros())
                .unwrap_or(pivots.len());
            pivots.insert(pos, (img, pre));
        }
        Ok(Embedding { source, target, images, pivots })
    }

    pub fn source(&self) -> &'static FieldContext {
        self.source
    }

    pub fn target(&self) -> &'static FieldContext {
        self.target
    }

    pub fn apply(&self, a: &FieldElement) -> FieldElement {
        assert_eq!(a.degree(), self.source.degree(), "element is not in the embedding source");
        let mut bits = 0u128;
        let mut rest = a.bits();
        while rest != 0 {
            let i = rest.trailing_zeros();
            bits ^= self.images[i as usize];
            rest &= rest - 1;
        }
        self.target.element(bits)
    }

    /// The preimage of `b` if it lies in the image of the source field.
    pub fn preimage(&self, b: &FieldElement) -> Option<FieldElement> {
        assert_eq!(b.degree(), self.target.degree(), "element is not in the embedding target");
        let mut c = b.bits();
        let mut pre = 0u128;
        for &(img, p) in &self.pivots {
            if c >> (127 - img.leading_zeros()) & 1 == 1 {
                c ^= img;
                pre ^= p;
            }
        }
        (c == 0).then(|| self.source.element(pre))
    }
}

impl FieldElement {
    /// The element of F_{2^e} whose embedding is `self`, if there is one.
    pub fn restrict(&self, smaller: &'static FieldContext) -> Result<Option<FieldElement>, FieldError> {
        Ok(Embedding::get(smaller.degree(), self.degree())?.preimage(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn embedding_is_a_ring_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (e, d) in [(1, 4), (2, 4), (2, 6), (3, 6), (4, 8), (4, 12), (6, 12), (3, 24), (8, 24)] {
            let src = FieldContext::of(e);
            let tgt = FieldContext::of(d);
            assert_eq!(src.zero().embed(tgt).unwrap(), tgt.zero());
            assert_eq!(src.one().embed(tgt).unwrap(), tgt.one());
            for _ in 0..100 {
                let a = src.random(&mut rng);
                let b = src.random(&mut rng);
                let (ea, eb) = (a.embed(tgt).unwrap(), b.embed(tgt).unwrap());
                assert_eq!((a + b).embed(tgt).unwrap(), ea + eb);
                assert_eq!((a * b).embed(tgt).unwrap(), ea * eb);
                assert_eq!(ea.restrict(src).unwrap(), Some(a));
            }
        }
    }

    #[test]
    fn embeddings_compose() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for (a, b, c) in [(2, 4, 8), (2, 6, 12), (3, 6, 12), (2, 4, 12), (4, 8, 24), (3, 12, 24)] {
            let (fa, fb, fc) = (FieldContext::of(a), FieldContext::of(b), FieldContext::of(c));
            for _ in 0..50 {
                let x = fa.random(&mut rng);
                let via = x.embed(fb).unwrap().embed(fc).unwrap();
                assert_eq!(via, x.embed(fc).unwrap());
            }
        }
    }

    #[test]
    fn non_divisible_degrees_are_rejected() {
        let a = FieldContext::of(3).one();
        assert_eq!(
            a.embed(FieldContext::of(4)),
            Err(FieldError::NotDivisible { from: 3, to: 4 })
        );
    }

    #[test]
    fn restriction_detects_subfield_membership() {
        let f16 = FieldContext::of(4);
        let f4 = FieldContext::of(2);
        let inside = f16.elements().filter(|x| x.restrict(f4).unwrap().is_some()).count();
        assert_eq!(inside, 4);
    }
}
