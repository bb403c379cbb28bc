//! Enhanced supersingular curves `(E, C_N)` of squarefree level and the
//! Brandt matrix of the `l`-isogeny graph on them.
//!
//! Every class model has scalar Frobenius `−p`, so each cyclic subgroup of
//! prime order `r` is defined over `F_{p^{2k}}` with `k = ord(−p mod r)`.
//! Each prime gets its own such field. A subgroup is identified by its
//! [`SubgroupSignature`] on the canonical class model, and subgroups of a
//! class are indexed in signature order.

use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::prime::{gcd, is_prime, is_squarefree, order_of_minus_p, prime_divisors, sigma1};
use crate::arith::{make_extension_field, ArithError, Embedding, FieldElement, FieldPolynomial, FieldRef};
use crate::curves::{
    isomorphism_scale, subgroup_signature, torsion_basis, velu_quotient, CurveError, CurvePoint,
    EllipticCurve, SubgroupSignature,
};
use crate::supersingular::{enumerate_supersingular, SupersingularClassTable, SupersingularError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnhancedError {
    #[error("p = {0} must be a prime congruent to 1 mod 12")]
    BadPrime(u64),
    #[error("l = {l} must be an odd prime different from p = {p}")]
    BadDegree { p: u64, l: u64 },
    #[error("level N = {0} must be a positive squarefree integer")]
    NotSquarefree(u64),
    #[error("level N = {n} must be prime to l·p = {lp}")]
    NotCoprime { n: u64, lp: u64 },
    #[error("found {found} enhanced classes, expected {expected}")]
    CountMismatch { found: usize, expected: u64 },
    #[error("cyclic subgroups of order {r} are not pairwise distinct")]
    DuplicateSubgroup { r: u64 },
    #[error("quotient of class {class} by kernel {kernel} does not descend to F_p^2")]
    NoDescent { class: usize, kernel: usize },
    #[error("quotient of class {class} by kernel {kernel} has an unknown j-invariant")]
    UnknownTarget { class: usize, kernel: usize },
    #[error("quotient of class {class} by kernel {kernel} is a twist of the class model")]
    NoIsomorphism { class: usize, kernel: usize },
    #[error("pushed subgroup of order {r} is not a subgroup of the target class")]
    LostSubgroup { r: u64 },
    #[error("level-structure point is a kernel point of the isogeny")]
    KernelCollision,
    #[error("Brandt matrix is not symmetric at ({i}, {j}): {bij} ≠ {bji}")]
    Asymmetric { i: usize, j: usize, bij: u64, bji: u64 },
    #[error("Brandt matrix row {i} sums to {sum}, expected {expected}")]
    RowSum { i: usize, sum: u64, expected: u64 },
    #[error("dual-kernel map is not an involution at edge {edge}")]
    BadInvolution { edge: usize },
    #[error(transparent)]
    Supersingular(#[from] SupersingularError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Checks `p ≡ 1 (mod 12)` prime, `l` an odd prime `≠ p`, and `N` in the
/// admissible set: squarefree and prime to `lp`.
pub fn check_admissible(p: u64, l: u64, n: u64) -> Result<(), EnhancedError> {
    if !is_prime(p) || p % 12 != 1 {
        return Err(EnhancedError::BadPrime(p));
    }
    if l == 2 || l == p || !is_prime(l) {
        return Err(EnhancedError::BadDegree { p, l });
    }
    if n == 0 || !is_squarefree(n) {
        return Err(EnhancedError::NotSquarefree(n));
    }
    if gcd(n, l * p) != 1 {
        return Err(EnhancedError::NotCoprime { n, lp: l * p });
    }
    Ok(())
}

/// `ν(N) = (p−1)σ₁(N)/12`.
pub fn vertex_count(p: u64, n: u64) -> u64 {
    (p - 1) * sigma1(n) / 12
}

/// `F_{p^{2k}}` with `k = ord(−p mod r)`: the smallest field over which the
/// `r`-torsion of a scalar-Frobenius model is rational.
pub fn torsion_field(p: u64, r: u64) -> Result<FieldRef, ArithError> {
    make_extension_field(p, 2 * order_of_minus_p(p, r) as usize)
}

#[derive(Clone, Debug)]
pub struct CyclicSubgroup {
    pub signature: SubgroupSignature,
    pub generator: CurvePoint,
}

/// The `r + 1` cyclic subgroups of order `r`, sorted by signature. `e` must
/// be a scalar-Frobenius model base-changed to [`torsion_field`]`(p, r)`.
pub fn cyclic_subgroups(
    e: &EllipticCurve,
    r: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<CyclicSubgroup>, EnhancedError> {
    let (gp, gq) = torsion_basis(e, r, rng)?;
    let mut gens = vec![gq.clone()];
    let mut acc = gp;
    for _ in 0..r {
        gens.push(acc.clone());
        acc = e.add(&acc, &gq);
    }
    let mut subs: Vec<CyclicSubgroup> = gens
        .into_iter()
        .map(|g| CyclicSubgroup {
            signature: subgroup_signature(e, &g, r),
            generator: g,
        })
        .collect();
    subs.sort_by(|a, b| a.signature.cmp(&b.signature));
    if subs.windows(2).any(|w| w[0].signature == w[1].signature) {
        return Err(EnhancedError::DuplicateSubgroup { r });
    }
    Ok(subs)
}

/// Torsion data of one class at one prime.
#[derive(Clone, Debug)]
pub struct TorsionLevel {
    pub prime: u64,
    pub embedding: Embedding,
    pub model: EllipticCurve,
    pub subgroups: Vec<CyclicSubgroup>,
}

impl TorsionLevel {
    pub fn index_of(&self, sig: &SubgroupSignature) -> Option<usize> {
        self.subgroups
            .binary_search_by(|s| s.signature.cmp(sig))
            .ok()
    }
}

fn torsion_seed(seed: u64, class: usize, r: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((class as u64) << 32) ^ r
}

/// Class table plus torsion data at a set of primes.
#[derive(Clone, Debug)]
pub struct LevelContext {
    classes: SupersingularClassTable,
    torsion: Vec<BTreeMap<u64, TorsionLevel>>,
}

impl LevelContext {
    pub fn new(p: u64, primes: &[u64], seed: u64) -> Result<Self, EnhancedError> {
        let classes = enumerate_supersingular(p, seed)?;
        let mut fields = BTreeMap::new();
        for &r in primes {
            let k = torsion_field(p, r)?;
            fields.insert(r, (Embedding::new(classes.field(), &k)?, k));
        }
        let jobs: Vec<(usize, u64)> = (0..classes.len())
            .flat_map(|c| primes.iter().map(move |&r| (c, r)))
            .collect();
        let levels = jobs
            .par_iter()
            .map(|&(c, r)| {
                let (emb, _) = &fields[&r];
                let model = classes.classes()[c].model.base_change(emb);
                let mut rng = ChaCha8Rng::seed_from_u64(torsion_seed(seed, c, r));
                let subgroups = cyclic_subgroups(&model, r, &mut rng)?;
                Ok(TorsionLevel {
                    prime: r,
                    embedding: emb.clone(),
                    model,
                    subgroups,
                })
            })
            .collect::<Result<Vec<_>, EnhancedError>>()?;
        let mut torsion = vec![BTreeMap::new(); classes.len()];
        for ((c, r), lv) in jobs.into_iter().zip(levels) {
            torsion[c].insert(r, lv);
        }
        Ok(Self { classes, torsion })
    }

    pub fn classes(&self) -> &SupersingularClassTable {
        &self.classes
    }

    pub fn level(&self, class: usize, r: u64) -> &TorsionLevel {
        &self.torsion[class][&r]
    }
}

/// A vertex `(E, C_N)`: a class and one subgroup index per prime `r | N`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EnhancedVertex {
    pub class_index: usize,
    /// Subgroup indices, one per prime of the table in increasing order.
    pub subgroups: Vec<usize>,
    pub level_signature: BTreeMap<u64, SubgroupSignature>,
}

#[derive(Clone, Debug)]
pub struct VertexTable {
    pub p: u64,
    pub l: u64,
    pub n: u64,
    primes: Vec<u64>,
    vertices: Vec<EnhancedVertex>,
    lookup: HashMap<(usize, Vec<usize>), usize>,
}

impl VertexTable {
    fn from_context(ctx: &LevelContext, l: u64, n: u64) -> Result<Self, EnhancedError> {
        let primes = prime_divisors(n);
        let mut vertices = Vec::new();
        for c in 0..ctx.classes.len() {
            let mut combos: Vec<Vec<usize>> = vec![vec![]];
            for &r in &primes {
                combos = combos
                    .into_iter()
                    .flat_map(|v| {
                        (0..=r as usize).map(move |i| {
                            let mut w = v.clone();
                            w.push(i);
                            w
                        })
                    })
                    .collect();
            }
            for subgroups in combos {
                let level_signature = primes
                    .iter()
                    .zip(&subgroups)
                    .map(|(&r, &i)| (r, ctx.level(c, r).subgroups[i].signature.clone()))
                    .collect();
                vertices.push(EnhancedVertex {
                    class_index: c,
                    subgroups,
                    level_signature,
                });
            }
        }
        let expected = vertex_count(ctx.classes.p(), n);
        if vertices.len() as u64 != expected {
            return Err(EnhancedError::CountMismatch {
                found: vertices.len(),
                expected,
            });
        }
        let lookup = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| ((v.class_index, v.subgroups.clone()), i))
            .collect();
        Ok(Self {
            p: ctx.classes.p(),
            l,
            n,
            primes,
            vertices,
            lookup,
        })
    }

    /// Prime divisors of `N`, increasing.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn vertices(&self) -> &[EnhancedVertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn find(&self, class: usize, subgroups: &[usize]) -> Option<usize> {
        self.lookup.get(&(class, subgroups.to_vec())).copied()
    }
}

/// Vertex table of level `N`, built with its own torsion data.
pub fn build_vertex_table(p: u64, l: u64, n: u64, seed: u64) -> Result<VertexTable, EnhancedError> {
    check_admissible(p, l, n)?;
    let ctx = LevelContext::new(p, &prime_divisors(n), seed)?;
    VertexTable::from_context(&ctx, l, n)
}

/// Image of a subgroup signature under `x ↦ s·num(x)/den(x)`, where the map
/// is defined over `F_{p²}` and the signature lives in `emb.target()`.
pub fn push_signature(
    x_map: &(FieldPolynomial, FieldPolynomial),
    scale: &FieldElement,
    sig: &SubgroupSignature,
    emb: &Embedding,
) -> Result<SubgroupSignature, EnhancedError> {
    let num = x_map.0.embed(emb);
    let den = x_map.1.embed(emb);
    let s = emb.apply(scale);
    let xs = sig
        .xs
        .iter()
        .map(|x| {
            let d = den.eval(x).inv().map_err(|_| EnhancedError::KernelCollision)?;
            Ok(&s * num.eval(x) * d)
        })
        .collect::<Result<Vec<_>, EnhancedError>>()?;
    Ok(SubgroupSignature::from_xs(sig.order, xs))
}

/// The `l`-isogeny out of a class with a given kernel, normalized to land
/// on the canonical model of its target class.
#[derive(Clone, Debug)]
pub struct ClassIsogeny {
    pub source: usize,
    pub kernel: usize,
    pub target: usize,
    /// `s = u²` with the codomain rescaled by `s` equal to the target model.
    pub scale: FieldElement,
    /// x-map over `F_{p²}` as `(num, den)`.
    pub x_map: (FieldPolynomial, FieldPolynomial),
    /// Index of the kernel of the dual isogeny among the target's subgroups.
    pub dual_kernel: usize,
}

/// The `l + 1` normalized isogenies out of each class.
pub fn class_isogenies(ctx: &LevelContext, l: u64) -> Result<Vec<Vec<ClassIsogeny>>, EnhancedError> {
    let classes = &ctx.classes;
    (0..classes.len())
        .into_par_iter()
        .map(|c| {
            let lv = ctx.level(c, l);
            (0..lv.subgroups.len())
                .map(|k| {
                    let phi = velu_quotient(&lv.model, &lv.subgroups[k].generator)?;
                    let (class, kernel) = (c, k);
                    let cod = phi
                        .codomain()
                        .descend(&lv.embedding)
                        .ok_or(EnhancedError::NoDescent { class, kernel })?;
                    let target = classes
                        .index_of(&cod.j_invariant())
                        .ok_or(EnhancedError::UnknownTarget { class, kernel })?;
                    let scale = isomorphism_scale(&cod, &classes.classes()[target].model)
                        .ok_or(EnhancedError::NoIsomorphism { class, kernel })?;
                    let (num, den) = phi.x_map();
                    let x_map = (
                        num.descend(&lv.embedding).ok_or(EnhancedError::NoDescent { class, kernel })?,
                        den.descend(&lv.embedding).ok_or(EnhancedError::NoDescent { class, kernel })?,
                    );
                    // the dual kernel is φ(E[l]) = φ(D) for any D ≠ ker φ
                    let other = &lv.subgroups[if k == 0 { 1 } else { 0 }].signature;
                    let image = push_signature(&x_map, &scale, other, &lv.embedding)?;
                    let dual_kernel = ctx
                        .level(target, l)
                        .index_of(&image)
                        .ok_or(EnhancedError::LostSubgroup { r: l })?;
                    Ok(ClassIsogeny {
                        source: c,
                        kernel: k,
                        target,
                        scale,
                        x_map,
                        dual_kernel,
                    })
                })
                .collect()
        })
        .collect()
}

/// Push the level structure of `v` through a class isogeny; returns the
/// subgroup indices on the target class.
pub fn push_level_structure(
    ctx: &LevelContext,
    primes: &[u64],
    iso: &ClassIsogeny,
    v: &EnhancedVertex,
) -> Result<Vec<usize>, EnhancedError> {
    primes
        .iter()
        .zip(&v.subgroups)
        .map(|(&r, &i)| {
            let src = ctx.level(iso.source, r);
            let image = push_signature(&iso.x_map, &iso.scale, &src.subgroups[i].signature, &src.embedding)?;
            ctx.level(iso.target, r)
                .index_of(&image)
                .ok_or(EnhancedError::LostSubgroup { r })
        })
        .collect()
}

/// Symmetric non-negative integer matrix with row sums `l + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrandtMatrix {
    entries: Vec<Vec<u64>>,
}

impl BrandtMatrix {
    /// Validates symmetry and row sums `degree`. Diagonal parity is reported
    /// by [`odd_diagonal`](Self::odd_diagonal) rather than enforced: a loop
    /// whose kernel is self-dual contributes 1 to the diagonal.
    pub fn new(entries: Vec<Vec<u64>>, degree: u64) -> Result<Self, EnhancedError> {
        let n = entries.len();
        for (i, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), n, "Brandt matrix must be square");
            for j in 0..i {
                if row[j] != entries[j][i] {
                    return Err(EnhancedError::Asymmetric {
                        i,
                        j,
                        bij: row[j],
                        bji: entries[j][i],
                    });
                }
            }
            let sum: u64 = row.iter().sum();
            if sum != degree {
                return Err(EnhancedError::RowSum {
                    i,
                    sum,
                    expected: degree,
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Indices of odd diagonal entries.
    pub fn odd_diagonal(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.entries[i][i] % 2 == 1).collect()
    }

    pub fn entries(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i][j]
    }
}

/// Oriented edge `(vertex, l-kernel)`; its tag is `source·(l+1) + kernel`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrientedEdge {
    pub source: usize,
    pub target: usize,
    pub kernel: usize,
}

/// `G_p^(l)(N)` with explicit oriented edges.
#[derive(Clone, Debug)]
pub struct EnhancedGraph {
    pub table: VertexTable,
    pub brandt: BrandtMatrix,
    /// Indexed by tag.
    pub edges: Vec<OrientedEdge>,
    /// Tag of the edge whose kernel is the dual kernel.
    pub dual: Vec<usize>,
    /// Orientation reversal: `dual`, except that self-dual loops at a vertex
    /// are paired with each other in kernel order. A vertex with an odd
    /// number of them keeps one fixed loop (a half-loop); this happens
    /// exactly when its diagonal Brandt entry is odd.
    pub involution: Vec<usize>,
}

impl EnhancedGraph {
    pub fn degree(&self) -> u64 {
        self.table.l + 1
    }

    /// Number of loops fixed by the dual-kernel map: kernels of
    /// endomorphisms `α` with `α̂ = −α`, i.e. `α² = −l`.
    pub fn self_dual_loops(&self) -> usize {
        self.dual.iter().enumerate().filter(|&(e, &d)| e == d).count()
    }

    /// Edges fixed by [`involution`](Self::involution).
    pub fn half_loops(&self) -> usize {
        self.involution.iter().enumerate().filter(|&(e, &j)| e == j).count()
    }
}

fn pair_self_dual(dual: &[usize], edges: &[OrientedEdge]) -> Vec<usize> {
    let mut inv = dual.to_vec();
    let mut pending: BTreeMap<usize, usize> = BTreeMap::new();
    for (e, &d) in dual.iter().enumerate() {
        if e != d {
            continue;
        }
        match pending.remove(&edges[e].source) {
            Some(f) => {
                inv[e] = f;
                inv[f] = e;
            }
            None => {
                pending.insert(edges[e].source, e);
            }
        }
    }
    inv
}

/// Builds `G_p^(l)(N)`: vertices, Brandt matrix, oriented edges, reversal.
pub fn build_isogeny_graph(p: u64, l: u64, n: u64, seed: u64) -> Result<EnhancedGraph, EnhancedError> {
    check_admissible(p, l, n)?;
    let mut primes = prime_divisors(n);
    primes.push(l);
    let ctx = LevelContext::new(p, &primes, seed)?;
    let table = VertexTable::from_context(&ctx, l, n)?;
    let isos = class_isogenies(&ctx, l)?;
    let deg = (l + 1) as usize;
    let rows = table
        .vertices
        .par_iter()
        .enumerate()
        .map(|(v, vert)| {
            isos[vert.class_index]
                .iter()
                .map(|iso| {
                    let subs = push_level_structure(&ctx, &table.primes, iso, vert)?;
                    let target = table
                        .find(iso.target, &subs)
                        .ok_or(EnhancedError::LostSubgroup { r: 0 })?;
                    Ok((
                        OrientedEdge {
                            source: v,
                            target,
                            kernel: iso.kernel,
                        },
                        target * deg + iso.dual_kernel,
                    ))
                })
                .collect::<Result<Vec<_>, EnhancedError>>()
        })
        .collect::<Result<Vec<_>, EnhancedError>>()?;
    let (edges, dual): (Vec<OrientedEdge>, Vec<usize>) = rows.into_iter().flatten().unzip();

    let m = table.len();
    let mut b = vec![vec![0u64; m]; m];
    for e in &edges {
        b[e.target][e.source] += 1;
    }
    let brandt = BrandtMatrix::new(b, l + 1)?;
    for (e, &d) in dual.iter().enumerate() {
        if dual[d] != e || edges[d].source != edges[e].target || edges[d].target != edges[e].source {
            return Err(EnhancedError::BadInvolution { edge: e });
        }
    }
    let involution = pair_self_dual(&dual, &edges);
    Ok(EnhancedGraph {
        table,
        brandt,
        edges,
        dual,
        involution,
    })
}

/// Brandt matrix `B_p^(l)(N)`.
pub fn brandt_matrix(p: u64, l: u64, n: u64, seed: u64) -> Result<BrandtMatrix, EnhancedError> {
    Ok(build_isogeny_graph(p, l, n, seed)?.brandt)
}
