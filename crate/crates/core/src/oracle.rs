//! Support enumeration: an independent Nash solver that never touches the
//! best-response polytopes. Used as ground truth for the polytope pipeline.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{dot, solve_linear, solve_system, ExactMatrix, Scalar, SystemSolution};
use crate::game::BimatrixGame;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct NashProfile {
    #[serde(serialize_with = "ser_scalars")]
    pub x: Vec<Scalar>,
    #[serde(serialize_with = "ser_scalars")]
    pub y: Vec<Scalar>,
    #[serde(serialize_with = "ser_scalar")]
    pub u: Scalar,
    #[serde(serialize_with = "ser_scalar")]
    pub v: Scalar,
}

fn ser_scalars<S: serde::Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

fn ser_scalar<S: serde::Serializer>(v: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl NashProfile {
    pub fn support_x(&self) -> Vec<usize> {
        support(&self.x)
    }

    pub fn support_y(&self) -> Vec<usize> {
        support(&self.y)
    }
}

fn support(v: &[Scalar]) -> Vec<usize> {
    (0..v.len()).filter(|&i| !v[i].is_zero()).collect()
}

/// Subsets of `0..n` of size `k`, lexicographic.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
            return out;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Equalizing strategy of the opponent: finds `s` on `cols` making every row in
/// `rows` of `pay` earn the same `w`, with `sum(s) = 1`.
/// `pay` is indexed `[row][col]` from the perspective of the player choosing rows.
enum Equalizer {
    Found(Vec<Scalar>, Scalar),
    None,
}

fn equalize(pay: &ExactMatrix, rows: &[usize], cols: &[usize], strict_shape: bool) -> Result<Equalizer> {
    let r = rows.len();
    let c = cols.len();
    let mut m = ExactMatrix::zeros(r + 1, c + 1);
    for (a, &i) in rows.iter().enumerate() {
        for (b, &j) in cols.iter().enumerate() {
            m[(a, b)] = pay[(i, j)].clone();
        }
        m[(a, c)] = -Scalar::one();
    }
    for b in 0..c {
        m[(r, b)] = Scalar::one();
    }
    let mut rhs = vec![Scalar::zero(); r + 1];
    rhs[r] = Scalar::one();
    let sol = if r == c && !strict_shape {
        solve_linear(&m, &rhs)?
    } else {
        match solve_system(&m, &rhs)? {
            SystemSolution::Unique(s) => Some(s),
            _ => None,
        }
    };
    // a singular system cannot come from an equilibrium of a non-degenerate game
    let Some(mut sol) = sol else {
        return Ok(Equalizer::None);
    };
    let w = sol.pop().expect("value component");
    let mut full = vec![Scalar::zero(); pay.cols()];
    for (b, &j) in cols.iter().enumerate() {
        full[j] = sol[b].clone();
    }
    Ok(Equalizer::Found(full, w))
}

/// Checks a candidate mixed strategy `s` of the column side against `pay`:
/// `Ok(true)` when nonnegative and every row outside `rows` earns strictly less.
/// A zero weight on a support column or a tie outside `rows` is a degeneracy.
fn screen(pay: &ExactMatrix, rows: &[usize], cols: &[usize], s: &[Scalar], w: &Scalar) -> Result<bool> {
    if cols.iter().any(|&j| s[j].is_negative()) {
        return Ok(false);
    }
    let payoffs = pay.mul_vec(s)?;
    let mut tie = false;
    for (i, p) in payoffs.iter().enumerate() {
        if rows.contains(&i) {
            continue;
        }
        if p > w {
            return Ok(false);
        }
        tie |= p == w;
    }
    if tie || cols.iter().any(|&j| s[j].is_zero()) {
        return Err(Error::DegenerateSupport(format!(
            "strategy on support {cols:?} has more pure best responses than its support size"
        )));
    }
    Ok(true)
}

fn solve_supports(game: &BimatrixGame, rows: &[usize], cols: &[usize], strict_shape: bool) -> Result<Option<NashProfile>> {
    let a = game.a();
    let bt = game.b().transpose();
    // y equalizes player 1's payoffs on `rows`; x equalizes player 2's on `cols`
    let Equalizer::Found(y, u) = equalize(a, rows, cols, strict_shape)? else {
        return Ok(None);
    };
    if !screen(a, rows, cols, &y, &u)? {
        return Ok(None);
    }
    let Equalizer::Found(x, v) = equalize(&bt, cols, rows, strict_shape)? else {
        return Ok(None);
    };
    if !screen(&bt, cols, rows, &x, &v)? {
        return Ok(None);
    }
    Ok(Some(NashProfile { x, y, u, v }))
}

/// All Nash equilibria of a non-degenerate game, over equal-size support pairs.
/// Sorted by support size, then supports, then probabilities.
pub fn support_enumeration(game: &BimatrixGame) -> Result<Vec<NashProfile>> {
    let (m, n) = (game.m(), game.n());
    let mut out = Vec::new();
    for k in 1..=m.min(n) {
        for rows in subsets(m, k) {
            for cols in subsets(n, k) {
                if let Some(p) = solve_supports(game, &rows, &cols, false)? {
                    out.push(p);
                }
            }
        }
    }
    sort_profiles(&mut out);
    Ok(out)
}

/// Diagnostic variant over all support pairs. An equilibrium on supports of
/// unequal size is reported as a degeneracy.
pub fn support_enumeration_strict(game: &BimatrixGame) -> Result<Vec<NashProfile>> {
    let (m, n) = (game.m(), game.n());
    let mut out = Vec::new();
    for k1 in 1..=m {
        for k2 in 1..=n {
            for rows in subsets(m, k1) {
                for cols in subsets(n, k2) {
                    if let Some(p) = solve_supports(game, &rows, &cols, true)? {
                        if k1 != k2 {
                            return Err(Error::DegenerateSupport(format!(
                                "equilibrium with supports {rows:?} and {cols:?} of different sizes"
                            )));
                        }
                        out.push(p);
                    }
                }
            }
        }
    }
    sort_profiles(&mut out);
    Ok(out)
}

fn sort_profiles(v: &mut [NashProfile]) {
    v.sort_by(|p, q| {
        let key = |e: &NashProfile| (e.support_x().len(), e.support_x(), e.support_y());
        (key(p), &p.x, &p.y).cmp(&(key(q), &q.x, &q.y))
    });
}

/// Best-response condition for each player: every pure strategy played with
/// positive probability earns the maximum payoff.
pub fn check_best_response(x: &[Scalar], y: &[Scalar], game: &BimatrixGame) -> Result<(bool, bool)> {
    if x.len() != game.m() || y.len() != game.n() {
        return Err(Error::Dimension("strategy lengths do not match the game".into()));
    }
    let ay = game.a().mul_vec(y)?;
    let xb: Vec<Scalar> = (0..game.n()).map(|j| {
        let col: Vec<Scalar> = (0..game.m()).map(|i| game.b()[(i, j)].clone()).collect();
        dot(x, &col)
    }).collect();
    let ok = |s: &[Scalar], pay: &[Scalar]| {
        let max = pay.iter().max().expect("nonempty");
        s.iter().zip(pay).all(|(p, v)| !p.is_positive() || v == max)
    };
    Ok((ok(x, &ay), ok(y, &xb)))
}
