//! Homogeneous counting quasimorphisms.
//!
//! A [`QuasimorphismSpec`] is a family of Brooks patterns on a free group,
//! optionally symmetrized over the four automorphisms of `F_2` generated by
//! inverting the generators, and optionally precomposed with a projection:
//! the handlebody retraction `pi_1(Sigma_g) -> F_g`, or the relative-class
//! projection of split torus braids.
//!
//! Homogenized values are computed *exactly* by cyclic occurrence counting
//! on the cyclically reduced core, never as numeric limits: the value on
//! `g^k` is exactly `k` times the value on `g`, and conjugacy invariance
//! and antisymmetry hold with integer-scaled arithmetic. Raw
//! (non-homogenized) evaluation uses linear counting and is kept for
//! homogenization-rate checks.
//!
//! Defects are reported as empirical lower bounds over declared sample
//! families; all downstream inequalities are asserted in the direction
//! where such bounds are sound.


use crate::cocycle::TorusBraid;
use crate::error::Error;
use crate::sample;
use crate::scalar::Real;
use crate::words::{cyclic_count, count_subword, CountMode, Letter, Presentation, Word};
use crate::Result;

/// One Brooks counting term: a nonempty reduced pattern with a coefficient.
#[derive(Clone, Debug)]
pub struct BrooksPattern<R> {
    pub pattern: Word,
    pub coefficient: R,
}

impl<R: Real> BrooksPattern<R> {
    pub fn new(pattern: Word, coefficient: R) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::EmptyPattern);
        }
        Ok(BrooksPattern {
            pattern,
            coefficient,
        })
    }
}

/// Precomposition applied before the free-group evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PreMap {
    /// Evaluate directly on words of the base free group.
    Identity,
    /// Evaluate on surface-group words through the handlebody retraction
    /// `a_i -> x_i`, `b_i -> 1` of the given surface presentation.
    HandlebodyRetract(Presentation),
    /// Evaluate on split torus braids through their relative `F_2` class,
    /// ignoring the central coordinate.
    TorusRelProjection,
}

/// A (homogeneous) counting quasimorphism specification.
#[derive(Clone, Debug)]
pub struct QuasimorphismSpec<R> {
    base: Presentation,
    terms: Vec<BrooksPattern<R>>,
    symmetrized: bool,
    pre_map: PreMap,
}

impl<R: Real> QuasimorphismSpec<R> {
    pub fn new(
        base: Presentation,
        terms: Vec<BrooksPattern<R>>,
        symmetrized: bool,
        pre_map: PreMap,
    ) -> Result<Self> {
        if base.genus().is_some() {
            return Err(Error::input("quasimorphism base must be a free group"));
        }
        for t in &terms {
            base.check(&t.pattern)?;
        }
        if symmetrized && base.rank() != 2 {
            return Err(Error::input("symmetrization is defined on F_2 only"));
        }
        match pre_map {
            PreMap::Identity => {}
            PreMap::HandlebodyRetract(p) => {
                let g = p
                    .genus()
                    .ok_or_else(|| Error::input("retract pre-map needs a surface presentation"))?;
                if g != base.rank() {
                    return Err(Error::PresentationMismatch(format!(
                        "retraction of genus {g} lands in F_{g}, base is F_{}",
                        base.rank()
                    )));
                }
            }
            PreMap::TorusRelProjection => {
                if base.rank() != 2 {
                    return Err(Error::input("torus relative classes live in F_2"));
                }
            }
        }
        Ok(QuasimorphismSpec {
            base,
            terms,
            symmetrized,
            pre_map,
        })
    }

    /// Single-pattern spec on a free group.
    pub fn brooks(base: Presentation, pattern: Word, coefficient: R) -> Result<Self> {
        let term = BrooksPattern::new(pattern, coefficient)?;
        Self::new(base, vec![term], false, PreMap::Identity)
    }

    /// Symmetrized single-pattern spec on `F_2`.
    pub fn symmetrized_brooks(pattern: Word, coefficient: R) -> Result<Self> {
        let term = BrooksPattern::new(pattern, coefficient)?;
        Self::new(Presentation::free(2), vec![term], true, PreMap::Identity)
    }

    /// The zero quasimorphism (no terms).
    pub fn zero(base: Presentation) -> Self {
        QuasimorphismSpec {
            base,
            terms: Vec::new(),
            symmetrized: false,
            pre_map: PreMap::Identity,
        }
    }

    pub fn with_pre_map(mut self, pre_map: PreMap) -> Result<Self> {
        Self::new(self.base, std::mem::take(&mut self.terms), self.symmetrized, pre_map)
    }

    pub fn base(&self) -> Presentation {
        self.base
    }

    pub fn pre_map(&self) -> PreMap {
        self.pre_map
    }

    pub fn is_symmetrized(&self) -> bool {
        self.symmetrized
    }

    pub fn terms(&self) -> &[BrooksPattern<R>] {
        &self.terms
    }

    fn orbit(&self, g: &Word) -> Vec<Word> {
        if self.symmetrized {
            vec![
                g.clone(),
                invert_generator(g, 1),
                invert_generator(g, 2),
                invert_generator(&invert_generator(g, 1), 2),
            ]
        } else {
            vec![g.clone()]
        }
    }

    fn terms_on_core(&self, core: &Word) -> R {
        let mut acc = R::zero();
        for t in &self.terms {
            let plus = cyclic_count(core, &t.pattern);
            let minus = cyclic_count(core, &t.pattern.invert());
            acc += t.coefficient * (R::of_usize(plus) - R::of_usize(minus));
        }
        acc
    }

    fn terms_linear(&self, w: &Word) -> R {
        let mut acc = R::zero();
        for t in &self.terms {
            let plus = count_subword(w, &t.pattern, CountMode::Linear).expect("nonempty pattern");
            let minus = count_subword(w, &t.pattern.invert(), CountMode::Linear)
                .expect("nonempty pattern");
            acc += t.coefficient * (R::of_usize(plus) - R::of_usize(minus));
        }
        acc
    }

    /// Exact homogenized value on an element of the base free group.
    pub fn eval_base_hom(&self, g: &Word) -> Result<R> {
        self.base.check(g)?;
        let orbit = self.orbit(g);
        let mut acc = R::zero();
        for image in &orbit {
            let (_, core) = image.cyclic_reduce();
            acc += self.terms_on_core(&core);
        }
        Ok(acc / R::of_usize(orbit.len()))
    }

    /// Raw (non-homogenized) value on an element of the base free group:
    /// linear occurrence counting on the reduced word.
    pub fn eval_base_raw(&self, g: &Word) -> Result<R> {
        self.base.check(g)?;
        let orbit = self.orbit(g);
        let mut acc = R::zero();
        for image in &orbit {
            acc += self.terms_linear(image);
        }
        Ok(acc / R::of_usize(orbit.len()))
    }

    /// Homogenized value on an element of the source group of the pre-map:
    /// a base word for `Identity`, a surface word for `HandlebodyRetract`.
    pub fn eval_word_hom(&self, g: &Word) -> Result<R> {
        match self.pre_map {
            PreMap::Identity => self.eval_base_hom(g),
            PreMap::HandlebodyRetract(p) => self.eval_base_hom(&p.handlebody_retract(g)?),
            PreMap::TorusRelProjection => Err(Error::PresentationMismatch(
                "this spec evaluates torus braids, not words".into(),
            )),
        }
    }

    /// Symmetrized homogenized evaluation; errors unless the spec is a
    /// symmetrized `F_2` family.
    pub fn symmetrize_eval(&self, g: &Word) -> Result<R> {
        if !self.symmetrized || self.base.rank() != 2 {
            return Err(Error::input(
                "symmetrize_eval needs a symmetrized F_2 specification",
            ));
        }
        self.eval_base_hom(g)
    }

    /// Homogenized value on a split torus braid. The central coordinate is
    /// ignored: the evaluation factors through the relative `F_2` class,
    /// which is what makes the value independent of the choice of isotopy.
    pub fn eval_braid_hom(&self, braid: &TorusBraid) -> Result<R> {
        match self.pre_map {
            PreMap::TorusRelProjection => self.eval_base_hom(&braid.rel),
            _ => Err(Error::PresentationMismatch(
                "this spec evaluates words, not torus braids".into(),
            )),
        }
    }

    /// Analytic cap for the homogenization boundary error: for every
    /// `N >= 1`,
    /// `|raw(g^N) - N * hom(g)| <= boundary_cap(g)`.
    /// The cap collects, per pattern, the window positions that touch the
    /// conjugator blocks of `g^N = u c^N u^-1` plus the truncation of cyclic
    /// occurrences at the ends of the `c^N` block.
    pub fn boundary_cap(&self, g: &Word) -> R {
        let (u, c) = g.cyclic_reduce();
        let mut acc = R::zero();
        for t in &self.terms {
            let per_sign = 2 * u.len() + 3 * t.pattern.len() + 2 * c.len();
            acc += t.coefficient.abs() * R::of_usize(2 * per_sign);
        }
        acc
    }
}

/// Invert every occurrence of one generator (an automorphism of the free
/// group; reduced words stay reduced).
pub fn invert_generator(w: &Word, gen: u16) -> Word {
    Word::reduce(w.letters().iter().map(|&l| {
        if l.gen() == gen {
            l.inverse()
        } else {
            l
        }
    }))
}

/// Standalone raw Brooks evaluation of one pattern (linear counting).
pub fn brooks_eval<R: Real>(term: &BrooksPattern<R>, base: &Presentation, g: &Word) -> Result<R> {
    base.check(&term.pattern)?;
    base.check(g)?;
    let plus = count_subword(g, &term.pattern, CountMode::Linear)?;
    let minus = count_subword(g, &term.pattern.invert(), CountMode::Linear)?;
    Ok(term.coefficient * (R::of_usize(plus) - R::of_usize(minus)))
}

/// Which evaluation a defect estimate refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DefectKind {
    /// Defect of the homogenized quasimorphism.
    Homogenized,
    /// Defect of the raw (linear-count) quasimorphism.
    Raw,
}

/// Empirical lower bound for the defect `D = sup |phi(h) - phi(gh) + phi(g)|`.
///
/// `max_observed` is a running maximum over the declared family of observed
/// pairs; it is monotone in the number of trials for a fixed seed stream and
/// never overestimates the true defect.
#[derive(Clone, Debug)]
pub struct DefectEstimate<R> {
    pub max_observed: R,
    pub trials: u64,
    pub seed: u64,
    pub kind: DefectKind,
    /// Optional user-supplied analytic cap, carried through reports for
    /// context. Inequalities are always asserted against the observed
    /// bound, never against the cap.
    pub analytic_cap: Option<R>,
}

impl<R: Real> DefectEstimate<R> {
    pub fn new(kind: DefectKind, seed: u64) -> Self {
        DefectEstimate {
            max_observed: R::zero(),
            trials: 0,
            seed,
            kind,
            analytic_cap: None,
        }
    }

    pub fn with_analytic_cap(mut self, cap: R) -> Self {
        self.analytic_cap = Some(cap);
        self
    }

    fn eval(&self, spec: &QuasimorphismSpec<R>, g: &Word) -> Result<R> {
        match self.kind {
            DefectKind::Homogenized => spec.eval_base_hom(g),
            DefectKind::Raw => spec.eval_base_raw(g),
        }
    }

    /// Fold one explicit pair `(g, h)` into the running maximum.
    pub fn observe_pair(
        &mut self,
        spec: &QuasimorphismSpec<R>,
        g: &Word,
        h: &Word,
    ) -> Result<R> {
        let d = (self.eval(spec, h)? - self.eval(spec, &g.concat(h))? + self.eval(spec, g)?).abs();
        if d > self.max_observed {
            self.max_observed = d;
        }
        self.trials += 1;
        Ok(d)
    }
}

/// Sampled defect lower bound for the homogenized evaluation: `trials`
/// uniformly random reduced pairs with lengths up to `max_len`.
pub fn defect_estimate<R: Real>(
    spec: &QuasimorphismSpec<R>,
    trials: u64,
    max_len: usize,
    seed: u64,
) -> Result<DefectEstimate<R>> {
    let mut est = DefectEstimate::new(DefectKind::Homogenized, seed);
    for i in 0..trials {
        let mut rng = sample::rng_for(seed, sample::streams::DEFECT, i);
        let g = sample::reduced_word_up_to(&mut rng, &spec.base(), max_len);
        let h = sample::reduced_word_up_to(&mut rng, &spec.base(), max_len);
        est.observe_pair(spec, &g, &h)?;
    }
    Ok(est)
}

/// Sampled defect lower bound for the raw evaluation. The declared family
/// mixes uniform pairs with power pairs `(w^k, w)`, whose telescoped
/// coboundaries control the distance between raw and homogenized values.
pub fn defect_estimate_raw<R: Real>(
    spec: &QuasimorphismSpec<R>,
    trials: u64,
    max_len: usize,
    seed: u64,
) -> Result<DefectEstimate<R>> {
    let mut est = DefectEstimate::new(DefectKind::Raw, seed);
    for i in 0..trials {
        let mut rng = sample::rng_for(seed, sample::streams::DEFECT_RAW, i);
        let g = sample::reduced_word_up_to(&mut rng, &spec.base(), max_len);
        let h = sample::reduced_word_up_to(&mut rng, &spec.base(), max_len);
        est.observe_pair(spec, &g, &h)?;
        let k = sample::int_range(&mut rng, 1, 6);
        est.observe_pair(spec, &g.power(k), &g)?;
    }
    Ok(est)
}

/// Report of the exact centre-vanishing check on split torus braids.
#[derive(Clone, Debug)]
pub struct NormalVanishingReport {
    pub trials: u64,
    pub violations: u64,
    pub max_abs_dev: f64,
}

/// Verify `phi(g c) = phi(g)` exactly for central elements `c` of the split
/// torus braid group. The evaluation factors through the relative
/// coordinate by construction, so any nonzero deviation is reported as a
/// violation.
pub fn normal_vanishing_check<R: Real>(
    spec: &QuasimorphismSpec<R>,
    trials: u64,
    max_len: usize,
    max_central: i64,
    seed: u64,
) -> Result<NormalVanishingReport> {
    let f2 = Presentation::free(2);
    let mut violations = 0;
    let mut max_abs_dev = 0.0f64;
    for i in 0..trials {
        let mut rng = sample::rng_for(seed, sample::streams::NORMAL_CHECK, i);
        let g = TorusBraid::new(
            (
                sample::int_range(&mut rng, -max_central, max_central),
                sample::int_range(&mut rng, -max_central, max_central),
            ),
            sample::reduced_word_up_to(&mut rng, &f2, max_len),
        );
        let c = TorusBraid::new(
            (
                sample::int_range(&mut rng, -max_central, max_central),
                sample::int_range(&mut rng, -max_central, max_central),
            ),
            Word::empty(),
        );
        let lhs = spec.eval_braid_hom(&g.mul(&c))?;
        let rhs = spec.eval_braid_hom(&g)?;
        let dev = (lhs - rhs).abs().as_f64();
        if dev != 0.0 {
            violations += 1;
            max_abs_dev = max_abs_dev.max(dev);
        }
    }
    Ok(NormalVanishingReport {
        trials,
        violations,
        max_abs_dev,
    })
}

/// All freely reduced words over `p` of length `1..=max_len`, in a fixed
/// deterministic order (by length, then lexicographic in generator index
/// with the positive letter before its inverse).
fn enumerate_reduced(p: &Presentation, max_len: usize) -> Vec<Word> {
    let rank = p.rank();
    let alphabet: Vec<Letter> = (1..=rank)
        .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
        .collect();
    let mut out: Vec<Word> = Vec::new();
    let mut frontier: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &alphabet {
                if w.last().is_some_and(|&last| last == l.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(Word::reduce));
        frontier = next;
    }
    out
}

/// Exhaustive search for a symmetrized single-pattern spec with a nonzero
/// homogenized value: patterns of length `<= max_pattern_len` against
/// elements of length `<= max_elem_len`, both enumerated deterministically.
/// Returns the first `(pattern, element, value)` found.
pub fn search_nonzero_symmetrized<R: Real>(
    max_pattern_len: usize,
    max_elem_len: usize,
) -> Result<Option<(Word, Word, R)>> {
    let f2 = Presentation::free(2);
    let elements = enumerate_reduced(&f2, max_elem_len);
    for pattern in enumerate_reduced(&f2, max_pattern_len) {
        let spec = QuasimorphismSpec::<R>::symmetrized_brooks(pattern.clone(), R::one())?;
        for g in &elements {
            let v = spec.eval_base_hom(g)?;
            if v != R::zero() {
                return Ok(Some((pattern, g.clone(), v)));
            }
        }
    }
    Ok(None)
}
