//! The prelog diagram of a simple normal crossing variety with at worst
//! triple intersections.
//!
//! For components `Y_i`, double intersections `Y_ij` and triple
//! intersections `Y_ijk` (indices increasing) the maps are
//!
//! ```text
//!   δ : ⊕ Num^{k-1}(Y_ij)  → ⊕ Num^k(Y_i)     pushforward, + into i, − into j
//!   ρ : ⊕ Num^k(Y_i)       → ⊕ Num^k(Y_ab)    pullback,    + from a, − from b
//!   ρ': ⊕ Num^k(Y_ij)      → ⊕ Num^k(Y_abc)   pullback,    signs (ab)+ (ac)− (bc)+
//!   δ': ⊕ Num^{k-1}(Y_ijk) → ⊕ Num^k(Y_ab)    pushforward, signs (ij)− (ik)+ (jk)−
//! ```
//!
//! and the prelog group is the image of `ker ρ` in `coker δ`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::chowvariety::{ChowError, Class, Inclusion, VarietyRing};
use crate::exactlin::{
    cokernel, gcd_maximal_minors, hnf, kernel_mod_p, kernel_saturated, rank, rank_mod_p,
    saturate, snf, solve_integer, CokernelStructure, IntMatrix, LinAlgError,
};

/// Primes at which ranks are probed; the invariant factors certify the rest.
pub const PROBE_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrelogError {
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cycle `{cycle}`: {msg}")]
    Cycle { cycle: String, msg: String },
    #[error("generator matrix has rank {rank} < {cols} columns")]
    RankDeficient { rank: usize, cols: usize },
}

pub type Result<T> = std::result::Result<T, PrelogError>;

#[derive(Clone, Debug)]
pub struct Component {
    pub index: usize,
    pub ring: VarietyRing,
}

#[derive(Clone, Debug)]
pub struct PairData {
    pub i: usize,
    pub j: usize,
    pub ring: VarietyRing,
    pub to_i: Arc<Inclusion>,
    pub to_j: Arc<Inclusion>,
}

#[derive(Clone, Debug)]
pub struct TripleData {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub ring: VarietyRing,
    pub to_ij: Arc<Inclusion>,
    pub to_ik: Arc<Inclusion>,
    pub to_jk: Arc<Inclusion>,
}

/// Incidence data with maps. Components, pairs and triples are kept in
/// lexicographic order of their indices.
#[derive(Clone, Debug)]
pub struct SncConfig {
    components: Vec<Component>,
    pairs: Vec<PairData>,
    triples: Vec<TripleData>,
}

fn config_err(msg: impl Into<String>) -> PrelogError {
    PrelogError::Config(msg.into())
}

impl SncConfig {
    pub fn new(
        mut components: Vec<Component>,
        mut pairs: Vec<PairData>,
        mut triples: Vec<TripleData>,
    ) -> Result<Self> {
        components.sort_by_key(|c| c.index);
        pairs.sort_by_key(|p| (p.i, p.j));
        triples.sort_by_key(|t| (t.i, t.j, t.k));
        for w in components.windows(2) {
            if w[0].index == w[1].index {
                return Err(config_err(format!("component {} listed twice", w[0].index)));
            }
        }
        let cfg = SncConfig {
            components,
            pairs,
            triples,
        };
        let dim = cfg.components.first().map(|c| c.ring.dim());
        for c in &cfg.components {
            if Some(c.ring.dim()) != dim {
                return Err(config_err(format!("component {} has a different dimension", c.index)));
            }
        }
        let check_map = |m: &Inclusion, from: &VarietyRing, to: &VarietyRing, what: &str| {
            if !m.source().same_as(from) || !m.target().same_as(to) {
                return Err(config_err(format!(
                    "{what}: map `{}` goes {} → {}, expected {} → {}",
                    m.name(),
                    m.source().name(),
                    m.target().name(),
                    from.name(),
                    to.name()
                )));
            }
            if m.codim() != 1 {
                return Err(config_err(format!("{what}: map `{}` is not a divisor", m.name())));
            }
            Ok(())
        };
        for w in cfg.pairs.windows(2) {
            if (w[0].i, w[0].j) == (w[1].i, w[1].j) {
                return Err(config_err(format!("pair {}{} listed twice", w[0].i, w[0].j)));
            }
        }
        for p in &cfg.pairs {
            if p.i >= p.j {
                return Err(config_err(format!("pair ({}, {}) not increasing", p.i, p.j)));
            }
            let yi = cfg.component(p.i)?;
            let yj = cfg.component(p.j)?;
            let what = format!("pair {}{}", p.i, p.j);
            check_map(&p.to_i, &p.ring, &yi.ring, &what)?;
            check_map(&p.to_j, &p.ring, &yj.ring, &what)?;
        }
        for t in &cfg.triples {
            if !(t.i < t.j && t.j < t.k) {
                return Err(config_err(format!("triple ({}, {}, {}) not increasing", t.i, t.j, t.k)));
            }
            let what = format!("triple {}{}{}", t.i, t.j, t.k);
            for (a, b, m) in [(t.i, t.j, &t.to_ij), (t.i, t.k, &t.to_ik), (t.j, t.k, &t.to_jk)] {
                let p = cfg
                    .pair(a, b)
                    .ok_or_else(|| config_err(format!("{what}: pair {a}{b} missing")))?;
                check_map(m, &t.ring, &p.ring, &what)?;
            }
        }
        Ok(cfg)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn pairs(&self) -> &[PairData] {
        &self.pairs
    }

    pub fn triples(&self) -> &[TripleData] {
        &self.triples
    }

    pub fn component(&self, index: usize) -> Result<&Component> {
        self.components
            .iter()
            .find(|c| c.index == index)
            .ok_or_else(|| config_err(format!("unknown component {index}")))
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<&PairData> {
        self.pairs.iter().find(|p| (p.i, p.j) == (i, j))
    }

    fn pair_position(&self, i: usize, j: usize) -> usize {
        self.pairs
            .iter()
            .position(|p| (p.i, p.j) == (i, j))
            .expect("validated pair")
    }

    fn component_position(&self, i: usize) -> usize {
        self.components
            .iter()
            .position(|c| c.index == i)
            .expect("validated component")
    }
}

/// Ranks of the graded pieces, or zero for degrees outside `0..=dim`.
fn piece_rank(ring: &VarietyRing, d: i64) -> Result<usize> {
    if d < 0 || d > ring.dim() as i64 {
        Ok(0)
    } else {
        Ok(ring.rank(d as u32)?)
    }
}

/// One labelled summand of a direct sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub label: String,
    pub offset: usize,
    pub size: usize,
}

fn blocks(labels: impl IntoIterator<Item = (String, usize)>) -> Vec<Block> {
    let mut offset = 0;
    labels
        .into_iter()
        .map(|(label, size)| {
            let b = Block {
                label,
                offset,
                size,
            };
            offset += size;
            b
        })
        .collect()
}

/// Matrix between direct sums, with its summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMatrix {
    pub matrix: IntMatrix,
    pub row_blocks: Vec<Block>,
    pub col_blocks: Vec<Block>,
}

impl BlockMatrix {
    fn zeros(row_blocks: Vec<Block>, col_blocks: Vec<Block>) -> Self {
        let r = row_blocks.iter().map(|b| b.size).sum();
        let c = col_blocks.iter().map(|b| b.size).sum();
        BlockMatrix {
            matrix: IntMatrix::zeros(r, c),
            row_blocks,
            col_blocks,
        }
    }

    fn put(&mut self, row_block: usize, col_block: usize, m: &IntMatrix, sign: i64) {
        let rb = &self.row_blocks[row_block];
        let cb = &self.col_blocks[col_block];
        assert_eq!((m.rows(), m.cols()), (rb.size, cb.size), "block shape");
        let m = if sign < 0 { m.neg() } else { m.clone() };
        self.matrix.set_block(rb.offset, cb.offset, &m);
    }

    pub fn block(&self, row_block: usize, col_block: usize) -> IntMatrix {
        let rb = &self.row_blocks[row_block];
        let cb = &self.col_blocks[col_block];
        self.matrix.block(rb.offset, cb.offset, rb.size, cb.size)
    }
}

fn component_blocks(cfg: &SncConfig, k: i64) -> Result<Vec<Block>> {
    let labels = cfg
        .components
        .iter()
        .map(|c| Ok((format!("Y{}", c.index), piece_rank(&c.ring, k)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks(labels))
}

fn pair_blocks(cfg: &SncConfig, k: i64) -> Result<Vec<Block>> {
    let labels = cfg
        .pairs
        .iter()
        .map(|p| Ok((format!("Y{}{}", p.i, p.j), piece_rank(&p.ring, k)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks(labels))
}

fn triple_blocks(cfg: &SncConfig, k: i64) -> Result<Vec<Block>> {
    let labels = cfg
        .triples
        .iter()
        .map(|t| Ok((format!("Y{}{}{}", t.i, t.j, t.k), piece_rank(&t.ring, k)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks(labels))
}

fn push_block(m: &Inclusion, d: i64) -> Result<Option<IntMatrix>> {
    if d < 0 || d > m.source().dim() as i64 {
        return Ok(None);
    }
    Ok(Some(m.pushforward_matrix(d as u32)?))
}

fn pull_block(m: &Inclusion, d: i64) -> Result<Option<IntMatrix>> {
    if d < 0 || d > m.source().dim() as i64 {
        return Ok(None);
    }
    Ok(Some(m.pullback_matrix(d as u32)?))
}

/// `δ : ⊕ Num^{k−1}(Y_ij) → ⊕ Num^k(Y_i)`.
pub fn build_delta(cfg: &SncConfig, k: u32) -> Result<BlockMatrix> {
    let k = k as i64;
    let mut out = BlockMatrix::zeros(component_blocks(cfg, k)?, pair_blocks(cfg, k - 1)?);
    for (c, p) in cfg.pairs.iter().enumerate() {
        for (target, map, sign) in [(p.i, &p.to_i, 1), (p.j, &p.to_j, -1)] {
            if let Some(m) = push_block(map, k - 1)? {
                out.put(cfg.component_position(target), c, &m, sign);
            }
        }
    }
    Ok(out)
}

/// `ρ : ⊕ Num^k(Y_i) → ⊕ Num^k(Y_ab)`.
pub fn build_rho(cfg: &SncConfig, k: u32) -> Result<BlockMatrix> {
    let k = k as i64;
    let mut out = BlockMatrix::zeros(pair_blocks(cfg, k)?, component_blocks(cfg, k)?);
    for (r, p) in cfg.pairs.iter().enumerate() {
        for (source, map, sign) in [(p.i, &p.to_i, 1), (p.j, &p.to_j, -1)] {
            if let Some(m) = pull_block(map, k)? {
                out.put(r, cfg.component_position(source), &m, sign);
            }
        }
    }
    Ok(out)
}

/// `ρ' : ⊕ Num^k(Y_ij) → ⊕ Num^k(Y_abc)`.
pub fn build_rho_prime(cfg: &SncConfig, k: u32) -> Result<BlockMatrix> {
    let k = k as i64;
    let mut out = BlockMatrix::zeros(triple_blocks(cfg, k)?, pair_blocks(cfg, k)?);
    for (r, t) in cfg.triples.iter().enumerate() {
        for ((a, b), map, sign) in [
            ((t.i, t.j), &t.to_ij, 1),
            ((t.i, t.k), &t.to_ik, -1),
            ((t.j, t.k), &t.to_jk, 1),
        ] {
            if let Some(m) = pull_block(map, k)? {
                out.put(r, cfg.pair_position(a, b), &m, sign);
            }
        }
    }
    Ok(out)
}

/// `δ' : ⊕ Num^{k−1}(Y_ijk) → ⊕ Num^k(Y_ab)`.
pub fn build_delta_prime(cfg: &SncConfig, k: u32) -> Result<BlockMatrix> {
    let k = k as i64;
    let mut out = BlockMatrix::zeros(pair_blocks(cfg, k)?, triple_blocks(cfg, k - 1)?);
    for (c, t) in cfg.triples.iter().enumerate() {
        for ((a, b), map, sign) in [
            ((t.i, t.j), &t.to_ij, -1),
            ((t.i, t.k), &t.to_ik, 1),
            ((t.j, t.k), &t.to_jk, -1),
        ] {
            if let Some(m) = push_block(map, k - 1)? {
                out.put(cfg.pair_position(a, b), c, &m, sign);
            }
        }
    }
    Ok(out)
}

/// One mismatching entry of `ρ∘δ` against `δ'∘ρ'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub row_block: String,
    pub col_block: String,
    pub row: usize,
    pub col: usize,
    /// Representative of the source basis vector.
    pub source_class: String,
    pub rho_delta: String,
    pub delta_rho: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutativityReport {
    pub holds: bool,
    pub discrepancies: Vec<Discrepancy>,
}

impl fmt::Display for CommutativityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds {
            return write!(f, "rho∘delta = delta'∘rho'");
        }
        writeln!(f, "{} mismatching entries", self.discrepancies.len())?;
        for d in self.discrepancies.iter().take(10) {
            writeln!(
                f,
                "  block {} ← {}, entry ({}, {}) on {}: {} vs {}",
                d.row_block, d.col_block, d.row, d.col, d.source_class, d.rho_delta, d.delta_rho
            )?;
        }
        Ok(())
    }
}

/// Checks `ρ(k)·δ(k) = δ'(k)·ρ'(k−1)` as maps `⊕Num^{k−1}(Y_ij) → ⊕Num^k(Y_ij)`.
pub fn check_commutativity(cfg: &SncConfig, k: u32) -> Result<CommutativityReport> {
    let delta = build_delta(cfg, k)?;
    let rho = build_rho(cfg, k)?;
    let lhs = rho.matrix.try_mul(&delta.matrix)?;
    let (rhs_rows, rhs_cols) = (lhs.rows(), lhs.cols());
    let rhs = if k == 0 {
        IntMatrix::zeros(rhs_rows, rhs_cols)
    } else {
        let rho_p = build_rho_prime(cfg, k - 1)?;
        let delta_p = build_delta_prime(cfg, k)?;
        delta_p.matrix.try_mul(&rho_p.matrix)?
    };
    let mut discrepancies = Vec::new();
    for rb in &rho.row_blocks {
        for cb in &delta.col_blocks {
            for r in 0..rb.size {
                for c in 0..cb.size {
                    let (i, j) = (rb.offset + r, cb.offset + c);
                    if lhs.get(i, j) != rhs.get(i, j) {
                        let pair = &cfg.pairs[cfg
                            .pairs
                            .iter()
                            .position(|p| format!("Y{}{}", p.i, p.j) == cb.label)
                            .expect("pair block")];
                        let piece = pair.ring.graded_piece(k - 1)?;
                        discrepancies.push(Discrepancy {
                            row_block: rb.label.clone(),
                            col_block: cb.label.clone(),
                            row: r,
                            col: c,
                            source_class: pair.ring.render(&piece.basis_class(c)),
                            rho_delta: lhs.get(i, j).to_string(),
                            delta_rho: rhs.get(i, j).to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(CommutativityReport {
        holds: discrepancies.is_empty(),
        discrepancies,
    })
}

/// Ranks of a matrix over Q and modulo the probe primes, with invariant
/// factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub ranks_mod_p: Vec<(u64, usize)>,
    /// Nonzero invariant factors, ones included.
    pub invariant_factors: Vec<BigInt>,
}

impl RankProfile {
    pub fn of(m: &IntMatrix) -> Result<Self> {
        let invariant_factors = snf(m).invariant_factors();
        let ranks_mod_p = PROBE_PRIMES
            .iter()
            .map(|&p| Ok((p, rank_mod_p(m, p)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(RankProfile {
            rows: m.rows(),
            cols: m.cols(),
            rank: rank(m),
            ranks_mod_p,
            invariant_factors,
        })
    }

    pub fn rank_mod(&self, p: u64) -> Option<usize> {
        self.ranks_mod_p.iter().find(|(q, _)| *q == p).map(|(_, r)| *r)
    }

    /// Factors greater than one.
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// Everything computed along the way to the prelog group in one degree.
#[derive(Clone, Debug)]
pub struct PrelogResult {
    pub degree: u32,
    pub component_ranks: Vec<(String, usize)>,
    pub pair_ranks: Vec<(String, usize)>,
    pub pair_ranks_below: Vec<(String, usize)>,
    pub triple_ranks_below: Vec<(String, usize)>,
    pub delta: BlockMatrix,
    pub rho: BlockMatrix,
    pub delta_profile: RankProfile,
    pub rho_profile: RankProfile,
    pub coker: CokernelStructure,
    /// Columns: basis of `ker ρ`.
    pub kernel: IntMatrix,
    /// `coker.projection · kernel`.
    pub m: IntMatrix,
    pub prelog_rank: usize,
    pub commutativity: CommutativityReport,
}

fn ranks_of(bl: &[Block]) -> Vec<(String, usize)> {
    bl.iter().map(|b| (b.label.clone(), b.size)).collect()
}

pub fn compute_prelog(cfg: &SncConfig, k: u32) -> Result<PrelogResult> {
    let delta = build_delta(cfg, k)?;
    let rho = build_rho(cfg, k)?;
    let commutativity = check_commutativity(cfg, k)?;
    let coker = cokernel(&delta.matrix);
    let kernel = kernel_saturated(&rho.matrix);
    let m = coker.projection.try_mul(&kernel)?;
    let prelog_rank = rank(&m);
    let below = k as i64 - 1;
    Ok(PrelogResult {
        degree: k,
        component_ranks: ranks_of(&delta.row_blocks),
        pair_ranks: ranks_of(&rho.row_blocks),
        pair_ranks_below: ranks_of(&delta.col_blocks),
        triple_ranks_below: ranks_of(&triple_blocks(cfg, below)?),
        delta_profile: RankProfile::of(&delta.matrix)?,
        rho_profile: RankProfile::of(&rho.matrix)?,
        delta,
        rho,
        coker,
        kernel,
        m,
        prelog_rank,
        commutativity,
    })
}

/// A tuple of classes, one per component (in component order).
#[derive(Clone, Debug)]
pub struct Cycle {
    pub name: String,
    pub entries: Vec<Class>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCheck {
    pub name: String,
    pub prelog: bool,
    /// Coordinates in `⊕ Num^k(Y_i)`.
    pub coordinates: Vec<BigInt>,
    /// Coordinates in `coker δ` modulo torsion.
    pub coker_coordinates: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleReport {
    pub cycles: Vec<CycleCheck>,
    pub all_prelog: bool,
    pub independent: bool,
    /// Every column of `M` is an integer combination of the cycle images.
    pub spans_image: bool,
}

impl CycleReport {
    pub fn is_basis(&self) -> bool {
        self.all_prelog && self.independent && self.spans_image
    }

    /// Columns: coker coordinates of the cycles.
    pub fn generator_matrix(&self) -> IntMatrix {
        let rows = self.cycles.first().map_or(0, |c| c.coker_coordinates.len());
        IntMatrix::from_columns(
            self.cycles.iter().map(|c| c.coker_coordinates.clone()).collect(),
            rows,
        )
        .expect("equal lengths")
    }
}

/// Checks the prelog condition for each cycle and whether their images form
/// a Z-basis of `im M`.
pub fn verify_prelog_cycles(
    cfg: &SncConfig,
    result: &PrelogResult,
    cycles: &[Cycle],
) -> Result<CycleReport> {
    let k = result.degree;
    let mut checks = Vec::new();
    for cyc in cycles {
        if cyc.entries.len() != cfg.components.len() {
            return Err(PrelogError::Cycle {
                cycle: cyc.name.clone(),
                msg: format!(
                    "{} entries for {} components",
                    cyc.entries.len(),
                    cfg.components.len()
                ),
            });
        }
        let mut coords = Vec::new();
        for (comp, class) in cfg.components.iter().zip(&cyc.entries) {
            let c = comp.ring.coordinates(class, k).map_err(|e| PrelogError::Cycle {
                cycle: cyc.name.clone(),
                msg: format!("entry on Y{}: {}", comp.index, e),
            })?;
            coords.extend(c);
        }
        let image = result.rho.matrix.mul_vec(&coords)?;
        let coker_coordinates = result.coker.projection.mul_vec(&coords)?;
        checks.push(CycleCheck {
            name: cyc.name.clone(),
            prelog: image.iter().all(Zero::is_zero),
            coordinates: coords,
            coker_coordinates,
        });
    }
    let mut report = CycleReport {
        all_prelog: checks.iter().all(|c| c.prelog),
        cycles: checks,
        independent: false,
        spans_image: false,
    };
    let n = report.generator_matrix();
    report.independent = rank(&n) == cycles.len();
    report.spans_image = if cycles.is_empty() {
        result.m.is_zero()
    } else {
        let mut ok = true;
        for col in result.m.column_vectors() {
            if solve_integer(&n, &col)?.is_none() {
                ok = false;
                break;
            }
        }
        ok
    };
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationResult {
    /// Columns: generator coordinates in coker-mod-torsion.
    pub generators: IntMatrix,
    pub gcd_maximal_minors: BigInt,
    pub ranks_mod_p: Vec<(u64, usize)>,
    pub kernel_mod_2: Vec<Vec<u64>>,
    /// Columns: basis of the saturation.
    pub saturated: IntMatrix,
    /// `[saturation : span]`, from the generators' coordinates in the
    /// saturated basis.
    pub index: BigInt,
    /// Half the sum of the generators, when it is integral.
    pub half_sum: Option<Vec<BigInt>>,
    /// The span with `half_sum` adjoined equals the saturation.
    pub half_sum_saturates: bool,
}

fn same_column_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    let ha = nonzero_rows(&hnf(&a.transpose()).0);
    let hb = nonzero_rows(&hnf(&b.transpose()).0);
    ha == hb
}

fn nonzero_rows(h: &IntMatrix) -> Vec<Vec<BigInt>> {
    h.row_vectors()
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Saturation of the lattice spanned by the columns of `generators`.
pub fn saturate_generators(generators: &IntMatrix) -> Result<SaturationResult> {
    let cols = generators.cols();
    let r = rank(generators);
    if r < cols {
        return Err(PrelogError::RankDeficient { rank: r, cols });
    }
    let saturated = saturate(generators);
    let coords: Vec<Vec<BigInt>> = generators
        .column_vectors()
        .iter()
        .map(|c| {
            solve_integer(&saturated, c)?
                .map(|s| s.x)
                .ok_or_else(|| PrelogError::Config("saturation misses a generator".into()))
        })
        .collect::<Result<_>>()?;
    let square = IntMatrix::from_columns(coords, saturated.cols())?;
    let index = num_traits::Signed::abs(&square.determinant()?);
    let ranks_mod_p = PROBE_PRIMES
        .iter()
        .map(|&p| Ok((p, rank_mod_p(generators, p)?)))
        .collect::<Result<Vec<_>>>()?;
    let two = BigInt::from(2);
    let sum: Vec<BigInt> = (0..generators.rows())
        .map(|i| generators.row(i).iter().sum())
        .collect();
    let half_sum = sum
        .iter()
        .all(|x| (x % &two).is_zero())
        .then(|| sum.iter().map(|x| x / &two).collect::<Vec<_>>());
    let half_sum_saturates = match &half_sum {
        None => false,
        Some(h) => {
            let extended = generators.hstack(&IntMatrix::from_columns(vec![h.clone()], h.len())?)?;
            same_column_lattice(&extended, &saturated)
        }
    };
    Ok(SaturationResult {
        generators: generators.clone(),
        gcd_maximal_minors: gcd_maximal_minors(generators),
        ranks_mod_p,
        kernel_mod_2: kernel_mod_p(generators, 2)?,
        saturated,
        index,
        half_sum,
        half_sum_saturates,
    })
}

/// Saturation of the prelog lattice spanned by verified basis cycles.
pub fn saturate_prelog(report: &CycleReport) -> Result<SaturationResult> {
    if !report.is_basis() {
        return Err(PrelogError::Config(
            "cycles are not a verified basis of the prelog group".into(),
        ));
    }
    saturate_generators(&report.generator_matrix())
}
