//! Exact rational immersions of a d-complex into ℝ^{2d}: the moment-curve
//! immersion, genericity certification, and signed intersection vectors.

use num_traits::{One, Signed, Zero};

use crate::complexes::{SimplicialComplex, Vertex};
use crate::{Int, Rat};

use super::{EmbedError, IntersectionVector};

/// Linear immersion: exact rational coordinates per vertex, target ℝ^{2d}.
/// Simplices are oriented by the global vertex order.
#[derive(Clone, Debug)]
pub struct Immersion {
    pub source: SimplicialComplex,
    pub d: usize,
    pub coords: Vec<Vec<Rat>>,
}

impl Immersion {
    pub fn new(
        source: SimplicialComplex,
        d: usize,
        coords: Vec<Vec<Rat>>,
    ) -> Result<Self, EmbedError> {
        if source.dim() > d as isize {
            return Err(EmbedError::DimensionMismatch(source.dim(), d));
        }
        if coords.len() != source.vertex_count() {
            return Err(EmbedError::BadCoordinates(coords.len() as Vertex));
        }
        for (v, c) in coords.iter().enumerate() {
            if c.len() != 2 * d {
                return Err(EmbedError::BadCoordinates(v as Vertex));
            }
        }
        Ok(Immersion { source, d, coords })
    }

    pub fn top_simplices(&self) -> &[Vec<Vertex>] {
        self.source.simplices(self.d)
    }

    fn point(&self, v: Vertex) -> &[Rat] {
        &self.coords[v as usize]
    }
}

/// Vertex i (in source order) goes to ((i+1), (i+1)^2, ..., (i+1)^{2d}).
/// Moment-curve general position makes disjoint simplices generic.
pub fn moment_immersion(l: &SimplicialComplex, d: usize) -> Result<Immersion, EmbedError> {
    let coords = (0..l.vertex_count())
        .map(|i| {
            let base = Int::from(i as i64 + 1);
            let mut p = Vec::with_capacity(2 * d);
            let mut pow = Int::one();
            for _ in 0..2 * d {
                pow *= &base;
                p.push(Rat::from(pow.clone()));
            }
            p
        })
        .collect();
    Immersion::new(l.clone(), d, coords)
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

fn rank_dense(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let nrows = m.len();
    let ncols = if nrows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][col].clone();
        for k in col..ncols {
            m[rank][k] = m[rank][k].clone() / inv.clone();
        }
        for r in 0..nrows {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in col..ncols {
                    let delta = f.clone() * m[rank][k].clone();
                    m[r][k] = m[r][k].clone() - delta;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// How the affine spans of two d-simplices meet.
enum SpanMeeting {
    /// Unique span intersection: full barycentric coordinates in both
    /// simplices and the determinant of the combined system.
    Point {
        bary_s: Vec<Rat>,
        bary_t: Vec<Rat>,
        det: Rat,
    },
    /// The spans do not intersect.
    Miss,
    /// Positive-dimensional intersection: not generic for disjoint pairs.
    Overlap,
}

/// One Gaussian pass over the augmented system, yielding the solution and
/// determinant when unique, or the degeneracy kind.
fn gauss_full(mut m: Vec<Vec<Rat>>) -> GaussOutcome {
    let nrows = m.len();
    let ncols = m[0].len() - 1;
    let mut det = Rat::one();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if piv != rank {
            m.swap(rank, piv);
            det = -det;
        }
        det *= m[rank][col].clone();
        let inv = m[rank][col].clone();
        for k in col..=ncols {
            m[rank][k] = m[rank][k].clone() / inv.clone();
        }
        for r in 0..nrows {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in col..=ncols {
                    let delta = f.clone() * m[rank][k].clone();
                    m[r][k] = m[r][k].clone() - delta;
                }
            }
        }
        rank += 1;
    }
    if rank < ncols.min(nrows) || rank < ncols {
        for row in m.iter().skip(rank) {
            if !row[ncols].is_zero() {
                return GaussOutcome::Inconsistent;
            }
        }
        return GaussOutcome::Underdetermined;
    }
    // rank == ncols == nrows here for the square systems we solve
    for row in m.iter().skip(rank) {
        if !row[ncols].is_zero() {
            return GaussOutcome::Inconsistent;
        }
    }
    let x = (0..ncols).map(|i| m[i][ncols].clone()).collect();
    GaussOutcome::Unique { x, det }
}

enum GaussOutcome {
    Unique { x: Vec<Rat>, det: Rat },
    Inconsistent,
    Underdetermined,
}

fn span_meeting(f: &Immersion, sigma: &[Vertex], tau: &[Vertex]) -> SpanMeeting {
    let d = f.d;
    let p0 = f.point(sigma[0]);
    let q0 = f.point(tau[0]);
    // columns: (p_i - p_0), then -(q_j - q_0); rhs q_0 - p_0
    let mut m = vec![vec![Rat::zero(); 2 * d + 1]; 2 * d];
    for (i, &v) in sigma[1..].iter().enumerate() {
        let col = sub(f.point(v), p0);
        for (r, x) in col.into_iter().enumerate() {
            m[r][i] = x;
        }
    }
    for (j, &v) in tau[1..].iter().enumerate() {
        let col = sub(f.point(v), q0);
        for (r, x) in col.into_iter().enumerate() {
            m[r][d + j] = -x;
        }
    }
    for (r, x) in sub(q0, p0).into_iter().enumerate() {
        m[r][2 * d] = x;
    }
    match gauss_full(m) {
        GaussOutcome::Unique { x, det } => {
            let s_rest = &x[..d];
            let t_rest = &x[d..];
            let mut bary_s = vec![Rat::one() - s_rest.iter().cloned().sum::<Rat>()];
            bary_s.extend_from_slice(s_rest);
            let mut bary_t = vec![Rat::one() - t_rest.iter().cloned().sum::<Rat>()];
            bary_t.extend_from_slice(t_rest);
            SpanMeeting::Point {
                bary_s,
                bary_t,
                det,
            }
        }
        GaussOutcome::Inconsistent => SpanMeeting::Miss,
        GaussOutcome::Underdetermined => SpanMeeting::Overlap,
    }
}

fn names(k: &SimplicialComplex, spx: &[Vertex]) -> Vec<String> {
    spx.iter().map(|&v| k.vertex_name(v).to_owned()).collect()
}

/// One sweep over all top-simplex pairs: certifies genericity and counts
/// the signed crossings of the disjoint pairs.
fn sweep(f: &Immersion) -> Result<IntersectionVector, EmbedError> {
    let tops = f.top_simplices().to_vec();
    for spx in &tops {
        let p0 = f.point(spx[0]);
        let rows: Vec<Vec<Rat>> = spx[1..].iter().map(|&v| sub(f.point(v), p0)).collect();
        if rank_dense(&rows) != spx.len() - 1 {
            return Err(EmbedError::DegenerateSimplex(names(&f.source, spx)));
        }
    }
    // det[u|w] = (-1)^d * det of the solved system, whose last d columns
    // carry -w; the mirrored entry follows by the same identity.
    let parity = if f.d % 2 == 0 { 1i64 } else { -1 };
    let mut entries = std::collections::BTreeMap::new();
    for (i, sigma) in tops.iter().enumerate() {
        for (j, tau) in tops.iter().enumerate().skip(i + 1) {
            if sigma.iter().any(|v| tau.contains(v)) {
                // adjacent pair: the joint span must be affinely
                // independent, but no crossing is scored
                let union: Vec<Vertex> = sigma
                    .iter()
                    .chain(tau.iter())
                    .copied()
                    .collect::<std::collections::BTreeSet<_>>()
                    .into_iter()
                    .collect();
                let p0 = f.point(union[0]);
                let rows: Vec<Vec<Rat>> =
                    union[1..].iter().map(|&v| sub(f.point(v), p0)).collect();
                if rank_dense(&rows) != union.len() - 1 {
                    return Err(EmbedError::NotGeneric(format!(
                        "adjacent simplices {:?} and {:?} have a degenerate joint span",
                        names(&f.source, sigma),
                        names(&f.source, tau)
                    )));
                }
                continue;
            }
            let value = match span_meeting(f, sigma, tau) {
                SpanMeeting::Point {
                    bary_s,
                    bary_t,
                    det,
                } => {
                    let strictly = |b: &[Rat]| b.iter().all(|x| x.is_positive());
                    let inside = |b: &[Rat]| b.iter().all(|x| !x.is_negative());
                    if strictly(&bary_s) && strictly(&bary_t) {
                        let sign = if det.is_positive() { 1 } else { -1 };
                        parity * sign
                    } else if inside(&bary_s) && inside(&bary_t) {
                        return Err(EmbedError::NotGeneric(format!(
                            "spans of {:?} and {:?} meet on a simplex boundary",
                            names(&f.source, sigma),
                            names(&f.source, tau)
                        )));
                    } else {
                        0
                    }
                }
                SpanMeeting::Miss => 0,
                SpanMeeting::Overlap => {
                    return Err(EmbedError::NotGeneric(format!(
                        "spans of {:?} and {:?} overlap in positive dimension",
                        names(&f.source, sigma),
                        names(&f.source, tau)
                    )));
                }
            };
            entries.insert((i, j), value);
            entries.insert((j, i), parity * value);
        }
    }
    let v = IntersectionVector { d: f.d, entries };
    debug_assert!(v.symmetry_holds());
    Ok(v)
}

/// Check genericity exactly: every top simplex is affinely independent,
/// for every pair of disjoint top simplices the affine spans either miss
/// or meet in one point interior to both (boundary incidence rejected),
/// and pairs sharing vertices have an affinely independent joint span.
pub fn generic_check(f: &Immersion) -> Result<(), EmbedError> {
    sweep(f).map(|_| ())
}

/// The intersection vector of a generic immersion: the signed crossing
/// count on every ordered pair of disjoint top simplices.
pub fn intersection_vector(f: &Immersion) -> Result<IntersectionVector, EmbedError> {
    sweep(f)
}

/// Signed crossings of a straight segment with a polyline, all rational.
/// Degenerate incidences (endpoint touches, overlaps) are reported so the
/// caller can retry with different detour parameters.
fn polyline_crossings(
    polyline: &[(Vec<Rat>, Vec<Rat>)],
    tau: (&[Rat], &[Rat]),
) -> Result<i64, EmbedError> {
    let mut total = 0i64;
    for (a, b) in polyline {
        total += segment_crossing((a, b), tau)?;
    }
    Ok(total)
}

/// Signed crossing number of segments (a,b) and (c,d) in the plane.
fn segment_crossing(
    seg: (&Vec<Rat>, &Vec<Rat>),
    tau: (&[Rat], &[Rat]),
) -> Result<i64, EmbedError> {
    let (a, b) = seg;
    let (c, d) = tau;
    let u = sub(b, a);
    let w = sub(d, c);
    let det = u[0].clone() * w[1].clone() - u[1].clone() * w[0].clone();
    if det.is_zero() {
        // parallel: overlapping collinear segments are degenerate
        let ac = sub(c, a);
        let cross = ac[0].clone() * u[1].clone() - ac[1].clone() * u[0].clone();
        if cross.is_zero() {
            // collinear: degenerate unless disjoint in the line; reject
            return Err(EmbedError::DetourDegenerate);
        }
        return Ok(0);
    }
    // a + s u = c + t w
    let rhs = sub(c, a);
    let s = (rhs[0].clone() * w[1].clone() - rhs[1].clone() * w[0].clone()) / det.clone();
    let t = -(u[0].clone() * rhs[1].clone() - u[1].clone() * rhs[0].clone()) / det.clone();
    let zero = Rat::zero();
    let one = Rat::one();
    let s_in = s >= zero && s <= one;
    let t_in = t >= zero && t <= one;
    if s_in && t_in && (s == zero || s == one || t == zero || t == one) {
        return Err(EmbedError::DetourDegenerate);
    }
    if s > zero && s < one && t > zero && t < one {
        Ok(if det.is_positive() { 1 } else { -1 })
    } else {
        Ok(0)
    }
}

/// Geometric realization of a single finger move for graphs in the plane:
/// the edge `sigma` is re-routed along an explicit polygonal detour that
/// winds `winding` times (sign included) around the image of vertex `w`,
/// and the intersection vector is recounted from actual crossings.
///
/// This is the geometric cross-check of the algebraic update rule; it
/// retries over a deterministic list of detour parameters until every
/// crossing is transverse.
pub fn detour_intersection_vector(
    f: &Immersion,
    sigma: usize,
    w: Vertex,
    winding: i64,
) -> Result<IntersectionVector, EmbedError> {
    if f.d != 1 {
        return Err(EmbedError::NotAGraph);
    }
    let base = intersection_vector(f)?;
    let tops = f.top_simplices().to_vec();
    let edge = &tops[sigma];
    if edge.contains(&w) {
        return Err(EmbedError::NotGeneric(
            "detour vertex lies on the moved edge".into(),
        ));
    }
    let pa = f.point(edge[0]).to_vec();
    let pb = f.point(edge[1]).to_vec();
    let pw = f.point(w).to_vec();
    // box radius: strictly inside half the min L∞ distance to other vertices
    let mut radius: Option<Rat> = None;
    for v in 0..f.source.vertex_count() as Vertex {
        if v == w {
            continue;
        }
        let p = f.point(v);
        let dist = (p[0].clone() - pw[0].clone())
            .abs()
            .max((p[1].clone() - pw[1].clone()).abs());
        radius = Some(match radius {
            None => dist,
            Some(r) => r.min(dist),
        });
    }
    let base_radius = radius.expect("graph with one vertex") / Rat::from(Int::from(3));

    let params: Vec<(Rat, u32)> = {
        let mut p = Vec::new();
        for shrink in 0..8u32 {
            for t in [(1, 2), (1, 3), (2, 5), (3, 7), (2, 7), (5, 11)] {
                p.push((Rat::new(Int::from(t.0), Int::from(t.1)), shrink));
            }
        }
        p
    };
    'attempt: for (t, shrink) in params {
        let r = base_radius.clone() / Rat::from(Int::from(1i64 << shrink));
        let m: Vec<Rat> = pa
            .iter()
            .zip(&pb)
            .map(|(x, y)| x.clone() + t.clone() * (y.clone() - x.clone()))
            .collect();
        // corners, counterclockwise from bottom-left
        let corners = [
            vec![pw[0].clone() - r.clone(), pw[1].clone() - r.clone()],
            vec![pw[0].clone() + r.clone(), pw[1].clone() - r.clone()],
            vec![pw[0].clone() + r.clone(), pw[1].clone() + r.clone()],
            vec![pw[0].clone() - r.clone(), pw[1].clone() + r.clone()],
        ];
        // polyline: a -> m, loop |winding| times, m -> b; the spokes m->c0
        // and c0->m cancel exactly in signed counts.
        let mut segments: Vec<(Vec<Rat>, Vec<Rat>)> = Vec::new();
        segments.push((pa.clone(), m.clone()));
        let loop_corners: Vec<Vec<Rat>> = if winding >= 0 {
            corners.to_vec()
        } else {
            corners.iter().rev().cloned().collect()
        };
        segments.push((m.clone(), loop_corners[0].clone()));
        for _ in 0..winding.unsigned_abs() {
            for i in 0..4 {
                segments.push((
                    loop_corners[i].clone(),
                    loop_corners[(i + 1) % 4].clone(),
                ));
            }
        }
        segments.push((loop_corners[0].clone(), m.clone()));
        segments.push((m.clone(), pb.clone()));

        let mut entries = base.entries.clone();
        for (j, tau) in tops.iter().enumerate() {
            if j == sigma || tau.iter().any(|v| edge.contains(v)) {
                continue;
            }
            let qc = f.point(tau[0]);
            let qd = f.point(tau[1]);
            let count = match polyline_crossings(&segments, (qc, qd)) {
                Ok(c) => c,
                Err(EmbedError::DetourDegenerate) => continue 'attempt,
                Err(e) => return Err(e),
            };
            entries.insert((sigma, j), count);
            entries.insert((j, sigma), -count);
        }
        let v = IntersectionVector {
            d: 1,
            entries,
        };
        assert!(v.symmetry_holds());
        return Ok(v);
    }
    Err(EmbedError::DetourDegenerate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn cx(max: &[&[&str]]) -> SimplicialComplex {
        SimplicialComplex::build(&max.iter().map(|s| s.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    pub(crate) fn k33() -> SimplicialComplex {
        let mut edges = Vec::new();
        for a in ["x", "y", "z"] {
            for b in ["u", "v", "w"] {
                edges.push(vec![a, b]);
            }
        }
        SimplicialComplex::build(&edges).unwrap()
    }

    #[test]
    fn moment_immersion_shapes() {
        let k = k33();
        let f = moment_immersion(&k, 1).unwrap();
        assert_eq!(f.coords.len(), 6);
        assert_eq!(f.coords[2], vec![rat(3, 1), rat(9, 1)]);
        generic_check(&f).unwrap();
    }

    #[test]
    fn crossing_segments() {
        // standard X: [(0,0),(2,2)] vs [(0,2),(2,0)]
        let k = cx(&[&["a", "b"], &["c", "d"]]);
        let coords = vec![
            vec![rat(0, 1), rat(0, 1)],
            vec![rat(2, 1), rat(2, 1)],
            vec![rat(0, 1), rat(2, 1)],
            vec![rat(2, 1), rat(0, 1)],
        ];
        let f = Immersion::new(k, 1, coords).unwrap();
        let v = intersection_vector(&f).unwrap();
        // det of the spanning rows [(2,2); (2,-2)] is -8
        assert_eq!(v.get(0, 1), -1);
        assert_eq!(v.get(1, 0), 1);
        // disjoint images: 0
        let k = cx(&[&["a", "b"], &["c", "d"]]);
        let coords = vec![
            vec![rat(0, 1), rat(0, 1)],
            vec![rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1)],
            vec![rat(1, 1), rat(1, 1)],
        ];
        let f = Immersion::new(k, 1, coords).unwrap();
        let v = intersection_vector(&f).unwrap();
        assert_eq!(v.get(0, 1), 0);
    }

    #[test]
    fn degenerate_rejected() {
        // two identical segments
        let k = cx(&[&["a", "b"], &["c", "d"]]);
        let coords = vec![
            vec![rat(0, 1), rat(0, 1)],
            vec![rat(1, 1), rat(1, 1)],
            vec![rat(0, 1), rat(0, 1)],
            vec![rat(1, 1), rat(1, 1)],
        ];
        let f = Immersion::new(k, 1, coords).unwrap();
        assert!(generic_check(&f).is_err());
        // a collapsed segment
        let k = cx(&[&["a", "b"]]);
        let coords = vec![vec![rat(0, 1), rat(0, 1)], vec![rat(0, 1), rat(0, 1)]];
        let f = Immersion::new(k, 1, coords).unwrap();
        assert!(matches!(
            generic_check(&f),
            Err(EmbedError::DegenerateSimplex(_))
        ));
        // single simplex: vacuously generic
        let k = cx(&[&["a", "b"]]);
        let coords = vec![vec![rat(0, 1), rat(0, 1)], vec![rat(1, 1), rat(0, 1)]];
        let f = Immersion::new(k, 1, coords).unwrap();
        generic_check(&f).unwrap();
    }

    #[test]
    fn k33_mod2_total_is_odd() {
        let f = moment_immersion(&k33(), 1).unwrap();
        let v = intersection_vector(&f).unwrap();
        let total: i64 = v
            .entries
            .iter()
            .filter(|(&(i, j), _)| i < j)
            .map(|(_, &x)| x)
            .sum();
        assert_eq!(total.rem_euclid(2), 1);
    }

    #[test]
    fn tetrahedron_skeleton_in_r6() {
        // 2-skeleton of the 3-simplex immersed by the moment curve in R^6
        let k = cx(&[
            &["a", "b", "c"],
            &["a", "b", "d"],
            &["a", "c", "d"],
            &["b", "c", "d"],
        ]);
        let f = moment_immersion(&k, 3).unwrap();
        // dim 2 < d = 3: no top simplices of dimension 3, vacuous genericity
        generic_check(&f).unwrap();
        assert!(intersection_vector(&f).unwrap().entries.is_empty());
    }
}
