//! Bimatrix games and their best-response polytopes.
//!
//! Labels `1..=m` are the row player's pure strategies and `m+1..=m+n` the
//! column player's. In `P = {x >= 0, B^T x <= 1}` the nonnegativity rows carry
//! labels `1..=m` and the best-response rows `m+1..=m+n`; in
//! `Q = {Ay <= 1, y >= 0}` the rows of `A` carry `1..=m` and `y >= 0` carries
//! `m+1..=m+n`.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{DegeneracyReport, Error, PolytopeRole, Result};
use crate::exact::{int, parse_scalar, ExactMatrix, Scalar};
use crate::polytope::{content_lines, LabeledPolytope, VertexSet};

/// Denominator for the generic perturbations of random games (a prime).
const PERTURBATION_PRIME: i64 = 1_000_003;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BimatrixGame {
    a: ExactMatrix,
    b: ExactMatrix,
}

impl BimatrixGame {
    pub fn new(a: ExactMatrix, b: ExactMatrix) -> Result<Self> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::Dimension(format!(
                "payoff matrices are {}x{} and {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::Invalid("each player needs at least one strategy".into()));
        }
        Ok(BimatrixGame { a, b })
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn a(&self) -> &ExactMatrix {
        &self.a
    }

    pub fn b(&self) -> &ExactMatrix {
        &self.b
    }

    pub fn label_count(&self) -> usize {
        self.m() + self.n()
    }

    /// Both players have payoff matrix `I_n`.
    pub fn coordination(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("coordination game needs n >= 1".into()));
        }
        Self::new(ExactMatrix::identity(n), ExactMatrix::identity(n))
    }

    /// Integer payoffs in `[1, 9]` plus distinct-looking perturbations `r / p`,
    /// redrawn until the game is non-degenerate. Deterministic in `seed`.
    pub fn random_nondegenerate(m: usize, n: usize, seed: u64) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Invalid("sizes must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = BigInt::from(PERTURBATION_PRIME);
        let draw = |rng: &mut ChaCha8Rng| -> ExactMatrix {
            let data = (0..m * n)
                .map(|_| {
                    let base = int(rng.random_range(1..=9));
                    let r = rng.random_range(1..PERTURBATION_PRIME);
                    base + Scalar::new(BigInt::from(r), p.clone())
                })
                .collect();
            ExactMatrix::new(m, n, data).expect("m*n entries")
        };
        loop {
            let a = draw(&mut rng);
            let b = draw(&mut rng);
            let game = Self::new(a, b)?;
            if is_nondegenerate(&game).nondegenerate {
                return Ok(game);
            }
        }
    }

    /// Adds a constant to each payoff matrix whose minimum entry is not positive.
    /// The shift for a matrix with minimum `c <= 0` is `1 - c`.
    pub fn positivize(&self) -> BimatrixGame {
        BimatrixGame { a: shift_positive(&self.a), b: shift_positive(&self.b) }
    }

    pub fn is_positive(&self) -> bool {
        self.a.entries().iter().chain(self.b.entries()).all(Signed::is_positive)
    }

    pub fn best_response_pair(&self) -> Result<BestResponsePair> {
        BestResponsePair::build(self)
    }

    /// `P = {x >= 0, B^T x <= 1}`.
    pub fn polytope_p(&self) -> LabeledPolytope {
        let (m, n) = (self.m(), self.n());
        LabeledPolytope::with_labels(self.b.transpose(), (1..=m).collect(), (m + 1..=m + n).collect())
            .expect("consistent shapes")
    }

    /// `Q = {Ay <= 1, y >= 0}`.
    pub fn polytope_q(&self) -> LabeledPolytope {
        let (m, n) = (self.m(), self.n());
        LabeledPolytope::with_labels(self.a.clone(), (m + 1..=m + n).collect(), (1..=m).collect())
            .expect("consistent shapes")
    }

    /// The labeled polytope `P x Q` in `R^{m+n}` with `C = [[0, A], [B^T, 0]]`
    /// and row `j` labeled `j`.
    pub fn product_polytope(&self) -> LabeledPolytope {
        let (m, n) = (self.m(), self.n());
        let d = m + n;
        let mut c = ExactMatrix::zeros(d, d);
        for i in 0..m {
            for j in 0..n {
                c[(i, m + j)] = self.a[(i, j)].clone();
                c[(m + j, i)] = self.b[(i, j)].clone();
            }
        }
        LabeledPolytope::new(c, (1..=d).collect()).expect("labels in range")
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Parses `m n`, then `m` rows of `A`, then `m` rows of `B`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header \"m n\""))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(hl, format!("bad integer {t:?}"))))
            .collect::<Result<_>>()?;
        let [m, n] = dims[..] else {
            return Err(Error::parse(hl, "header must be \"m n\""));
        };
        if m == 0 || n == 0 {
            return Err(Error::parse(hl, "sizes must be at least 1"));
        }
        let mut read = |what: &str| -> Result<ExactMatrix> {
            let mut data = Vec::with_capacity(m * n);
            for r in 0..m {
                let (ln, l) = lines
                    .next()
                    .ok_or_else(|| Error::parse(hl, format!("missing row {} of {what}", r + 1)))?;
                let toks: Vec<&str> = l.split_whitespace().collect();
                if toks.len() != n {
                    return Err(Error::parse(ln, format!("expected {n} entries in row {} of {what}", r + 1)));
                }
                for t in toks {
                    data.push(parse_scalar(t).ok_or_else(|| Error::parse(ln, format!("bad rational {t:?}")))?);
                }
            }
            ExactMatrix::new(m, n, data)
        };
        let a = read("A")?;
        let b = read("B")?;
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, "trailing content after B"));
        }
        Self::new(a, b)
    }

    pub fn to_text(&self) -> String {
        format!("{} {}\n{}{}", self.m(), self.n(), self.a, self.b)
    }
}

impl fmt::Display for BimatrixGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn shift_positive(m: &ExactMatrix) -> ExactMatrix {
    let alpha = positivizing_shift(m);
    if alpha.is_zero() {
        return m.clone();
    }
    m.map(|v| v + &alpha)
}

/// `0` when every entry is positive, otherwise `1 - min`.
pub fn positivizing_shift(m: &ExactMatrix) -> Scalar {
    match m.min_entry() {
        Some(min) if !min.is_positive() => Scalar::one() - min,
        _ => Scalar::zero(),
    }
}

/// The projective map `y -> y / (1 + alpha * sum(y))` carrying
/// `{Ay <= 1, y >= 0}` onto the polytope of `A + alpha`.
pub fn projective_map(y: &[Scalar], alpha: &Scalar) -> Vec<Scalar> {
    let total: Scalar = y.iter().sum();
    let scale = Scalar::one() + alpha * total;
    y.iter().map(|v| v / &scale).collect()
}

/// `P` and `Q` with their vertices and graphs. Only constructed for
/// non-degenerate games with bounded, full-dimensional polytopes.
#[derive(Clone, Debug)]
pub struct BestResponsePair {
    game: BimatrixGame,
    p_poly: LabeledPolytope,
    q_poly: LabeledPolytope,
    p: VertexSet,
    q: VertexSet,
}

impl BestResponsePair {
    pub fn build(game: &BimatrixGame) -> Result<Self> {
        let p_poly = game.polytope_p();
        let q_poly = game.polytope_q();
        let p = p_poly.analyze(PolytopeRole::P)?;
        let q = q_poly.analyze(PolytopeRole::Q)?;
        Ok(BestResponsePair { game: game.clone(), p_poly, q_poly, p, q })
    }

    pub fn game(&self) -> &BimatrixGame {
        &self.game
    }

    pub fn m(&self) -> usize {
        self.game.m()
    }

    pub fn n(&self) -> usize {
        self.game.n()
    }

    pub fn p(&self) -> &VertexSet {
        &self.p
    }

    pub fn q(&self) -> &VertexSet {
        &self.q
    }

    pub fn p_polytope(&self) -> &LabeledPolytope {
        &self.p_poly
    }

    pub fn q_polytope(&self) -> &LabeledPolytope {
        &self.q_poly
    }

    /// Inequality index of `label` in `P` (every label occurs exactly once).
    pub fn p_inequality(&self, label: usize) -> usize {
        label - 1
    }

    /// Inequality index of `label` in `Q`.
    pub fn q_inequality(&self, label: usize) -> usize {
        let (m, n) = (self.m(), self.n());
        if label <= m {
            n + label - 1
        } else {
            label - m - 1
        }
    }
}

/// Outcome of the vertex label-count test.
#[derive(Clone, Debug, PartialEq)]
pub struct Nondegeneracy {
    pub nondegenerate: bool,
    pub witness: Option<DegeneracyReport>,
}

/// Non-degenerate iff no point of `P` has more than `m` labels and no point of
/// `Q` more than `n`; checking vertices suffices.
pub fn is_nondegenerate(game: &BimatrixGame) -> Nondegeneracy {
    for (poly, role) in [(game.polytope_p(), PolytopeRole::P), (game.polytope_q(), PolytopeRole::Q)] {
        if let Some(v) = poly.basic_points().into_iter().find(|v| v.binding.len() > poly.dim()) {
            return Nondegeneracy { nondegenerate: false, witness: Some(v.degeneracy(role)) };
        }
    }
    Nondegeneracy { nondegenerate: true, witness: None }
}

/// The `d x k` game `(U, C^T)` with `U = [e_l(1) ... e_l(k)]`.
pub fn unit_game_from_labeled_polytope(p: &LabeledPolytope) -> Result<BimatrixGame> {
    let d = p.dim();
    let k = p.rows().rows();
    if k == 0 {
        return Err(Error::Invalid("labeled polytope has no rows to turn into strategies".into()));
    }
    let mut u = ExactMatrix::zeros(d, k);
    for (j, &l) in p.row_labels().iter().enumerate() {
        if l == 0 || l > d {
            return Err(Error::Invalid(format!("row label {l} outside 1..={d}")));
        }
        u[(l - 1, j)] = Scalar::one();
    }
    BimatrixGame::new(u, p.rows().transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn coordination_polytopes_are_cubes() {
        let pair = BimatrixGame::coordination(2).unwrap().best_response_pair().unwrap();
        assert_eq!(pair.p().vertices.len(), 4);
        assert_eq!(pair.q().vertices.len(), 4);
        let pair = BimatrixGame::coordination(5).unwrap().best_response_pair().unwrap();
        assert_eq!(pair.p().vertices.len(), 32);
        assert_eq!(pair.q().vertices.len(), 32);
        assert!(pair.p().graph.is_regular(5));
    }

    #[test]
    fn origin_carries_own_labels() {
        let pair = BimatrixGame::random_nondegenerate(3, 2, 4).unwrap().best_response_pair().unwrap();
        let p0 = &pair.p().vertices[0];
        let q0 = &pair.q().vertices[0];
        assert!(p0.is_origin() && q0.is_origin());
        assert_eq!(p0.labels, vec![1, 2, 3]);
        assert_eq!(q0.labels, vec![4, 5]);
    }

    #[test]
    fn inequality_lookup_matches_labels() {
        let pair = BimatrixGame::random_nondegenerate(3, 4, 9).unwrap().best_response_pair().unwrap();
        for l in 1..=7 {
            assert_eq!(pair.p_polytope().label(pair.p_inequality(l)), l);
            assert_eq!(pair.q_polytope().label(pair.q_inequality(l)), l);
        }
    }

    #[test]
    fn duplicate_columns_are_degenerate() {
        // two identical column strategies always tie as best responses
        let a = ExactMatrix::from_ints(&[&[1, 1], &[2, 2]]);
        let g = BimatrixGame::new(a.clone(), a).unwrap();
        assert!(matches!(g.best_response_pair(), Err(Error::Degenerate(_))));
        let check = is_nondegenerate(&g);
        assert!(!check.nondegenerate);
        assert_eq!(check.witness.unwrap().polytope, PolytopeRole::P);
    }

    #[test]
    fn repeated_row_gives_three_labels_in_q() {
        let a = ExactMatrix::from_ints(&[&[1, 1], &[1, 1]]);
        let b = ExactMatrix::from_ints(&[&[1, 2], &[2, 1]]);
        let check = is_nondegenerate(&BimatrixGame::new(a, b).unwrap());
        assert!(!check.nondegenerate);
        let w = check.witness.unwrap();
        assert_eq!(w.polytope, PolytopeRole::Q);
        assert_eq!(w.labels.len(), 3);
    }

    #[test]
    fn coordination_is_nondegenerate() {
        for n in 1..=5 {
            assert!(is_nondegenerate(&BimatrixGame::coordination(n).unwrap()).nondegenerate);
        }
    }

    #[test]
    fn random_games_are_deterministic() {
        let g1 = BimatrixGame::random_nondegenerate(3, 3, 1).unwrap();
        let g2 = BimatrixGame::random_nondegenerate(3, 3, 1).unwrap();
        assert_eq!(g1, g2);
        assert!(is_nondegenerate(&g1).nondegenerate);
        assert!(g1.is_positive());
        assert_ne!(g1, BimatrixGame::random_nondegenerate(3, 3, 2).unwrap());
    }

    #[test]
    fn positivize_shifts() {
        let g = BimatrixGame::coordination(2).unwrap();
        // identity has zero entries, so it is shifted by 1
        assert_eq!(g.positivize().a(), &ExactMatrix::from_ints(&[&[2, 1], &[1, 2]]));
        let pos = BimatrixGame::new(ExactMatrix::from_ints(&[&[1, 2]]), ExactMatrix::from_ints(&[&[3, 1]])).unwrap();
        assert_eq!(pos.positivize(), pos);
        let a = ExactMatrix::from_ints(&[&[-2, 0], &[1, 4]]);
        let g = BimatrixGame::new(a, ExactMatrix::from_ints(&[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(g.positivize().a(), &ExactMatrix::from_ints(&[&[1, 3], &[4, 7]]));
        let pennies = BimatrixGame::new(
            ExactMatrix::from_ints(&[&[1, -1], &[-1, 1]]),
            ExactMatrix::from_ints(&[&[-1, 1], &[1, -1]]),
        )
        .unwrap();
        let shifted = pennies.positivize();
        assert_eq!(shifted.a(), &ExactMatrix::from_ints(&[&[3, 1], &[1, 3]]));
        assert_eq!(shifted.b(), &ExactMatrix::from_ints(&[&[1, 3], &[3, 1]]));
    }

    #[test]
    fn unit_game() {
        let cube = LabeledPolytope::new(ExactMatrix::identity(3), vec![1, 2, 3]).unwrap();
        let g = unit_game_from_labeled_polytope(&cube).unwrap();
        assert_eq!(g, BimatrixGame::coordination(3).unwrap());

        let tri = LabeledPolytope::new(ExactMatrix::from_ints(&[&[1, 1]]), vec![2]).unwrap();
        let g = unit_game_from_labeled_polytope(&tri).unwrap();
        assert_eq!(g.a(), &ExactMatrix::from_ints(&[&[0], &[1]]));
        assert_eq!(g.b(), &ExactMatrix::from_ints(&[&[1], &[1]]));

        let game = BimatrixGame::random_nondegenerate(2, 3, 5).unwrap();
        let g = unit_game_from_labeled_polytope(&game.product_polytope()).unwrap();
        assert_eq!(g.a(), &ExactMatrix::identity(5));
    }

    #[test]
    fn projective_map_fixes_origin() {
        let y = vec![ratio(1, 2), ratio(1, 4)];
        let img = projective_map(&y, &int(2));
        assert_eq!(img, vec![ratio(1, 5), ratio(1, 10)]);
        assert_eq!(projective_map(&[int(0), int(0)], &int(3)), vec![int(0), int(0)]);
    }

    #[test]
    fn parse_game_file() {
        let text = "# matching pennies, shifted\n2 2\n3 1\n1 3\n1 3\n3 1\n";
        let g = BimatrixGame::parse(text).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(BimatrixGame::parse(&g.to_text()).unwrap(), g);
        let err = BimatrixGame::parse("2 2\n1 2\n3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = BimatrixGame::parse("2 2\n1 2\n3 4\n1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        assert!(BimatrixGame::parse("1 1\n1/0\n1\n").is_err());
        assert!(BimatrixGame::parse("1 1\n1\n1\n1\n").is_err());
    }
}
