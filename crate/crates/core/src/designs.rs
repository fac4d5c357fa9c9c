//! Frame potentials, t-designs, and the zero-block design of twin Hoggar
//! families.
//!
//! Points of `Z_2^3 x Z_2^3` are indexed `8 * iota + kappa`, so a set of
//! points fits in a `u64` and translation by `(mu, nu)` is an XOR of
//! indices. All combinatorial counts are exact integers.

use serde::{Deserialize, Serialize};

use crate::algebra::{inner, normalized, BinaryTriple, ComplexMatrix, HadamardMatrix, C64};
use crate::error::{invalid, Error, Result};
use crate::sic::SicFamily;

/// Number of points (and blocks) of the zero-block design.
pub const SIGMA: usize = 64;
/// Parameters of the Menon design realized by the Hoggar zeros.
pub const MENON_PARAMS: (usize, usize, usize) = (64, 28, 12);

/// A finite set of pure states, stored as unit vectors.
#[derive(Clone, Debug)]
pub struct StateSet {
    d: usize,
    vectors: Vec<Vec<C64>>,
}

impl StateSet {
    pub fn from_vectors(vectors: Vec<Vec<C64>>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return invalid("state set must be nonempty");
        };
        let d = first.len();
        if vectors.iter().any(|v| v.len() != d) {
            return invalid("state vectors have different lengths");
        }
        Ok(Self {
            d,
            vectors: vectors.iter().map(|v| normalized(v)).collect(),
        })
    }

    /// Accepts rank-one projectors, checking idempotence and unit trace.
    pub fn from_projectors(projectors: &[ComplexMatrix], tol: f64) -> Result<Self> {
        let mut vectors = Vec::with_capacity(projectors.len());
        for p in projectors {
            if !p.is_square() {
                return invalid("projector must be square");
            }
            let sq = p.mul(p)?;
            if sq.max_abs_diff(p)? > tol || (p.trace().re - 1.0).abs() > tol {
                return invalid("matrix is not a rank-one projector");
            }
            // the column with the largest diagonal entry spans the range
            let c = (0..p.rows())
                .max_by(|&a, &b| p[(a, a)].re.total_cmp(&p[(b, b)].re))
                .unwrap_or(0);
            vectors.push((0..p.rows()).map(|r| p[(r, c)]).collect());
        }
        Self::from_vectors(vectors)
    }

    pub fn from_family(fam: &SicFamily) -> Self {
        Self {
            d: fam.dim(),
            vectors: fam.unit_vectors(),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    pub fn projector(&self, i: usize) -> ComplexMatrix {
        ComplexMatrix::outer(&self.vectors[i], 1.0)
    }

    /// `tr(rho_i rho_j)`.
    pub fn overlap(&self, i: usize, j: usize) -> f64 {
        inner(&self.vectors[i], &self.vectors[j]).norm_sqr()
    }
}

/// `(1/k^2) sum_{i,j} tr(rho_i rho_j)^t`, diagonal terms included.
pub fn frame_potential(set: &StateSet, t: u32) -> f64 {
    let k = set.len();
    let mut acc = 0.0;
    for i in 0..k {
        for j in 0..k {
            acc += set.overlap(i, j).powi(t as i32);
        }
    }
    acc / (k * k) as f64
}

/// Haar average of `tr(rho sigma)^t` over pure states in C^d:
/// `t! (d-1)! / (t+d-1)!`.
pub fn haar_moment(d: usize, t: u32) -> f64 {
    // 1 / C(t+d-1, t)
    (1..=t as usize)
        .map(|i| i as f64 / (d - 1 + i) as f64)
        .product()
}

/// True when the frame potentials of orders `1..=t` match the Haar moments.
pub fn is_t_design(set: &StateSet, t: u32, tol: f64) -> bool {
    (1..=t).all(|s| (frame_potential(set, s) - haar_moment(set.d, s)).abs() <= tol)
}

/// Blocks `B_(mu,nu)` over the 64 points, as bit masks indexed `8 mu + nu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroBlockDesign {
    blocks: Vec<u64>,
    params: (usize, usize, usize),
}

impl ZeroBlockDesign {
    /// Wraps raw block masks; parameters are read off the first block and
    /// first block pair, without checking uniformity.
    pub fn from_masks(blocks: Vec<u64>) -> Self {
        let k = blocks.first().map_or(0, |b| b.count_ones() as usize);
        let lambda = if blocks.len() > 1 {
            (blocks[0] & blocks[1]).count_ones() as usize
        } else {
            0
        };
        Self {
            blocks,
            params: (SIGMA, k, lambda),
        }
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    /// `(v, k, lambda)` as measured.
    pub fn params(&self) -> (usize, usize, usize) {
        self.params
    }

    pub fn block(&self, mu: BinaryTriple, nu: BinaryTriple) -> u64 {
        self.blocks[point_index(mu, nu)]
    }

    pub fn contains(&self, block: usize, point: usize) -> bool {
        self.blocks[block] >> point & 1 == 1
    }

    /// Incidence matrix as CSV: one row per block, one 0/1 column per point.
    pub fn incidence_csv(&self) -> String {
        let mut out = String::new();
        for b in 0..self.blocks.len() {
            let row: Vec<&str> = (0..SIGMA)
                .map(|p| if self.contains(b, p) { "1" } else { "0" })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn point_index(iota: BinaryTriple, kappa: BinaryTriple) -> usize {
    8 * iota.index() + kappa.index()
}

pub fn point_label(p: usize) -> (BinaryTriple, BinaryTriple) {
    (
        BinaryTriple::from_index(p / 8),
        BinaryTriple::from_index(p % 8),
    )
}

fn members(mask: u64) -> impl Iterator<Item = usize> {
    (0..SIGMA).filter(move |p| mask >> p & 1 == 1)
}

/// Extracts the zero blocks `B_(mu,nu) = {(iota,kappa) : H_(iota,kappa)(v) . H_(mu,nu)(conj v) = 0}`,
/// declaring an inner product zero when its modulus is below `threshold`.
/// Fails with [`Error::NotADesign`] if block sizes or pairwise
/// intersections are not constant.
pub fn zero_blocks(
    fam_v: &SicFamily,
    fam_vbar: &SicFamily,
    threshold: f64,
) -> Result<ZeroBlockDesign> {
    if fam_v.dim() != 8 || !fam_v.hadamard().is_sylvester() {
        return Err(Error::Unsupported(
            "zero blocks need d = 8 twins over the Sylvester matrix".into(),
        ));
    }
    // shape and parameter checks are shared with the overlap tables
    crate::sic::overlap_table(fam_v, fam_vbar, 0, 0)?;
    let mut blocks = vec![0u64; SIGMA];
    for (b, block) in blocks.iter_mut().enumerate() {
        let target = &fam_vbar.vectors()[b].coords;
        for (p, cv) in fam_v.vectors().iter().enumerate() {
            if inner(target, &cv.coords).norm() < threshold {
                *block |= 1 << p;
            }
        }
    }
    let k = blocks[0].count_ones() as usize;
    if let Some(b) = blocks.iter().position(|m| m.count_ones() as usize != k) {
        return Err(Error::NotADesign(format!(
            "block {b} has {} points, block 0 has {k}",
            blocks[b].count_ones()
        )));
    }
    let lambda = (blocks[0] & blocks[1]).count_ones() as usize;
    for a in 0..SIGMA {
        for b in a + 1..SIGMA {
            let x = (blocks[a] & blocks[b]).count_ones() as usize;
            if x != lambda {
                return Err(Error::NotADesign(format!(
                    "blocks {a} and {b} meet in {x} points, expected {lambda}"
                )));
            }
        }
    }
    Ok(ZeroBlockDesign {
        blocks,
        params: (SIGMA, k, lambda),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub pass: bool,
    pub points: usize,
    pub blocks: usize,
    pub block_size: Option<usize>,
    pub replication: Option<usize>,
    pub point_pair_lambda: Option<usize>,
    pub block_pair_lambda: Option<usize>,
    /// First axiom violation found.
    pub counterexample: Option<String>,
}

/// Checks the symmetric-design axioms against the measured parameters.
pub fn verify_symmetric_design(design: &ZeroBlockDesign) -> DesignReport {
    let blocks = &design.blocks;
    let (_, k, lambda) = design.params;
    let mut report = DesignReport {
        pass: false,
        points: SIGMA,
        blocks: blocks.len(),
        block_size: None,
        replication: None,
        point_pair_lambda: None,
        block_pair_lambda: None,
        counterexample: None,
    };
    let fail = |mut r: DesignReport, msg: String| {
        r.counterexample = Some(msg);
        r
    };
    if blocks.len() != SIGMA {
        return fail(report, format!("{} blocks, expected {SIGMA}", blocks.len()));
    }
    if let Some(b) = blocks.iter().position(|m| m.count_ones() as usize != k) {
        return fail(
            report,
            format!(
                "block {b} has {} points, expected {k}",
                blocks[b].count_ones()
            ),
        );
    }
    report.block_size = Some(k);
    for p in 0..SIGMA {
        let r = blocks.iter().filter(|m| *m >> p & 1 == 1).count();
        if r != k {
            return fail(
                report,
                format!("point {p} lies in {r} blocks, expected {k}"),
            );
        }
    }
    report.replication = Some(k);
    for p in 0..SIGMA {
        for q in p + 1..SIGMA {
            let both = blocks
                .iter()
                .filter(|m| *m >> p & 1 == 1 && *m >> q & 1 == 1)
                .count();
            if both != lambda {
                return fail(
                    report,
                    format!("points {p} and {q} share {both} blocks, expected {lambda}"),
                );
            }
        }
    }
    report.point_pair_lambda = Some(lambda);
    for a in 0..SIGMA {
        for b in a + 1..SIGMA {
            let x = (blocks[a] & blocks[b]).count_ones() as usize;
            if x != lambda {
                return fail(
                    report,
                    format!("blocks {a} and {b} meet in {x} points, expected {lambda}"),
                );
            }
        }
    }
    report.block_pair_lambda = Some(lambda);
    report.pass = true;
    report
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferenceReport {
    pub pass: bool,
    pub size: usize,
    /// Ordered pairs `(x, y)` in the set with `x + y = delta`, indexed by `delta`.
    pub counts: Vec<usize>,
}

/// Checks that `set` is a `(64, 28, 12)` difference set in `Z_2^6`
/// (differences and sums coincide there).
pub fn difference_set_check(set: u64) -> DifferenceReport {
    let mut counts = vec![0usize; SIGMA];
    for x in members(set) {
        for y in members(set) {
            counts[x ^ y] += 1;
        }
    }
    let size = set.count_ones() as usize;
    let (_, k, lambda) = MENON_PARAMS;
    let pass = size == k && counts[1..].iter().all(|&c| c == lambda);
    DifferenceReport { pass, size, counts }
}

/// True iff every block equals `B_(0,0) + (mu, nu)`.
pub fn block_translation_check(design: &ZeroBlockDesign) -> bool {
    design.blocks.len() == SIGMA
        && (0..SIGMA).all(|b| translate(design.blocks[0], b) == design.blocks[b])
}

/// The point set `mask + shift`.
pub fn translate(mask: u64, shift: usize) -> u64 {
    members(mask).fold(0u64, |acc, p| acc | 1 << (p ^ shift))
}

/// Counts disagreements between the numeric zero blocks and the sign rule
/// `(iota,kappa) in B_(mu,nu) iff h_(mu+iota, nu+kappa) = -1`.
pub fn membership_mismatches(design: &ZeroBlockDesign, h: &HadamardMatrix) -> Result<usize> {
    if h.dim() != 8 || !h.is_real() {
        return invalid("membership rule needs the real d = 8 Hadamard");
    }
    let mut bad = 0;
    for b in 0..SIGMA {
        let (mu, nu) = point_label(b);
        for p in 0..SIGMA {
            let (iota, kappa) = point_label(p);
            let rule = h.sign((mu + iota).index(), (nu + kappa).index()) == Some(-1);
            if rule != design.contains(b, p) {
                bad += 1;
            }
        }
    }
    Ok(bad)
}

#[derive(Serialize, Deserialize)]
struct BlockRecord {
    mu: BinaryTriple,
    nu: BinaryTriple,
    members: Vec<(BinaryTriple, BinaryTriple)>,
}

#[derive(Serialize, Deserialize)]
struct DesignRecord {
    points: usize,
    blocks: Vec<BlockRecord>,
    params: (usize, usize, usize),
}

impl Serialize for ZeroBlockDesign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DesignRecord {
            points: SIGMA,
            blocks: self
                .blocks
                .iter()
                .enumerate()
                .map(|(b, &mask)| {
                    let (mu, nu) = point_label(b);
                    BlockRecord {
                        mu,
                        nu,
                        members: members(mask).map(point_label).collect(),
                    }
                })
                .collect(),
            params: self.params,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZeroBlockDesign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = DesignRecord::deserialize(d)?;
        if rec.points != SIGMA {
            return Err(serde::de::Error::custom(format!("expected {SIGMA} points")));
        }
        let mut blocks = vec![0u64; rec.blocks.len()];
        for (i, b) in rec.blocks.iter().enumerate() {
            let idx = point_index(b.mu, b.nu);
            if idx >= blocks.len() {
                return Err(serde::de::Error::custom(format!(
                    "block label out of range at {i}"
                )));
            }
            blocks[idx] = b
                .members
                .iter()
                .fold(0u64, |m, &(i, k)| m | 1 << point_index(i, k));
        }
        Ok(Self {
            blocks,
            params: rec.params,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::sylvester_hadamard;
    use crate::sic::{conjugate_set, jw_vectors};

    fn twins() -> (SicFamily, SicFamily) {
        let f = jw_vectors(&sylvester_hadamard(3).unwrap(), C64::new(-1.0, 2.0));
        let g = conjugate_set(&f);
        (f, g)
    }

    #[test]
    fn haar_moments() {
        assert!((haar_moment(8, 1) - 1.0 / 8.0).abs() < 1e-16);
        assert!((haar_moment(8, 2) - 1.0 / 36.0).abs() < 1e-16);
        assert!((haar_moment(8, 3) - 1.0 / 120.0).abs() < 1e-16);
        assert!((haar_moment(2, 2) - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn hoggar_frame_potentials() {
        let (f, _) = twins();
        let s = StateSet::from_family(&f);
        let fp1 = frame_potential(&s, 1);
        assert!((fp1 - 1.0 / 8.0).abs() < 1e-12, "{fp1}");
        assert!((frame_potential(&s, 2) - 1.0 / 36.0).abs() < 1e-12);
        let fp3 = frame_potential(&s, 3);
        assert!((fp3 - (1.0 / 64.0 + 63.0 / 64.0 / 729.0)).abs() < 1e-12);
        assert!(is_t_design(&s, 2, 1e-12));
        assert!(!is_t_design(&s, 3, 1e-12));
    }

    #[test]
    fn projector_input() {
        let (f, _) = twins();
        let projectors: Vec<ComplexMatrix> = f
            .unit_vectors()
            .iter()
            .map(|v| ComplexMatrix::outer(v, 1.0))
            .collect();
        let s = StateSet::from_projectors(&projectors, 1e-12).unwrap();
        assert!((frame_potential(&s, 2) - 1.0 / 36.0).abs() < 1e-12);
        let not_projector = ComplexMatrix::identity(8);
        assert!(StateSet::from_projectors(&[not_projector], 1e-12).is_err());
        assert!(StateSet::from_vectors(vec![]).is_err());
    }

    #[test]
    fn hoggar_zero_design() {
        let (f, g) = twins();
        let design = zero_blocks(&f, &g, 1e-10).unwrap();
        assert_eq!(design.params(), MENON_PARAMS);
        let report = verify_symmetric_design(&design);
        assert!(report.pass, "{report:?}");
        assert_eq!(report.replication, Some(28));
        let h = f.hadamard();
        let b00 = design.blocks()[0];
        for p in 0..SIGMA {
            let (i, k) = point_label(p);
            assert_eq!(b00 >> p & 1 == 1, h.sign(i.index(), k.index()) == Some(-1));
        }
        assert!(block_translation_check(&design));
        assert_eq!(membership_mismatches(&design, h).unwrap(), 0);
        assert_eq!(zero_blocks(&f, &g, 1e-6).unwrap(), design);
    }

    #[test]
    fn mutated_designs_fail() {
        let (f, g) = twins();
        let design = zero_blocks(&f, &g, 1e-10).unwrap();
        let mut masks = design.blocks().to_vec();
        let first = masks[5].trailing_zeros();
        masks[5] &= !(1u64 << first);
        let report = verify_symmetric_design(&ZeroBlockDesign::from_masks(masks));
        assert!(!report.pass);
        assert!(report.counterexample.unwrap().contains("block 5"));

        let mut shuffled = design.blocks().to_vec();
        shuffled.swap(3, 9);
        let shuffled = ZeroBlockDesign::from_masks(shuffled);
        assert!(!block_translation_check(&shuffled));
        // relabelling does not break the axioms
        assert!(verify_symmetric_design(&shuffled).pass);
    }

    #[test]
    fn inadmissible_twins_are_not_a_design() {
        let h = sylvester_hadamard(3).unwrap();
        let f = jw_vectors(&h, C64::new(-1.0, 1.0));
        let g = conjugate_set(&f);
        assert!(matches!(
            zero_blocks(&f, &g, 1e-10),
            Err(Error::NotADesign(_)) | Ok(_)
        ));
    }

    #[test]
    fn difference_sets() {
        let (f, g) = twins();
        let design = zero_blocks(&f, &g, 1e-10).unwrap();
        let r = difference_set_check(design.blocks()[0]);
        assert!(r.pass);
        assert_eq!(r.counts[0], 28);
        let empty = difference_set_check(0);
        assert!(!empty.pass && empty.counts.iter().all(|&c| c == 0));
        let full = difference_set_check(u64::MAX);
        assert!(!full.pass && full.counts.iter().all(|&c| c == 64));
    }

    #[test]
    fn translation_by_zero_is_identity() {
        let (f, g) = twins();
        let design = zero_blocks(&f, &g, 1e-10).unwrap();
        assert_eq!(translate(design.blocks()[0], 0), design.blocks()[0]);
    }

    #[test]
    fn json_and_csv_exports() {
        let (f, g) = twins();
        let design = zero_blocks(&f, &g, 1e-10).unwrap();
        let v = serde_json::to_value(&design).unwrap();
        assert_eq!(v["params"], serde_json::json!([64, 28, 12]));
        assert_eq!(v["points"], 64);
        assert_eq!(v["blocks"][0]["members"].as_array().unwrap().len(), 28);
        let back: ZeroBlockDesign = serde_json::from_value(v).unwrap();
        assert_eq!(back, design);
        let csv = design.incidence_csv();
        assert_eq!(csv.lines().count(), 64);
        assert!(csv
            .lines()
            .all(|l| l.split(',').filter(|c| *c == "1").count() == 28));
    }
}
