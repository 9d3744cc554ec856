//! Input files, the analysis pipeline and report rendering behind the
//! `tpsurf` binary.
//!
//! Input format:
//!
//! ```text
//! # comment
//! bidegree: 2 2
//! p0: t^2*u^2 + s^2*u*v
//! p1: t^2*u*v + s^2*v^2
//! p2: t^2*v^2
//! p3: s^2*u^2
//! seed: 7        (optional)
//! box: 6 3       (optional)
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;
use tpsurf::surface::{BasepointReport, DetBackend, Route};
use tpsurf::{
    basepoint_check, build_d1_nu, classify_p22, detect_linear_syzygy, implicitize, min_syz_generators, normalize_linear,
    special_pair, BiDeg, BiPoly, Error, ImplicitOptions, Orientation, P22Class, TPSurface, XPoly,
};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    WorkLimit(String),
    Io(String),
    /// A result failed its own check.
    Failed(String),
}

impl CliError {
    /// 2 parse, 3 hypothesis violated, 4 work limit, 5 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                Error::Parse { .. }
                | Error::DependentGenerators
                | Error::InvalidSurface(_)
                | Error::DegreeMismatch { .. } => 2,
                Error::Basepoints(_) | Error::MultipleLinearSyzygies { .. } => 3,
                _ => 5,
            },
            CliError::WorkLimit(_) => 4,
            CliError::Io(_) | CliError::Failed(_) => 5,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::WorkLimit(_) => "WORK_LIMIT",
            CliError::Io(_) => "IO_ERROR",
            CliError::Failed(_) => "VERIFICATION_FAILED",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::WorkLimit(m) => write!(f, "refused: {m}"),
            CliError::Io(m) | CliError::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn parse_error(line: usize, column: usize, reason: impl Into<String>) -> CliError {
    CliError::Core(Error::Parse {
        line,
        column,
        reason: reason.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceInput {
    pub a: u32,
    pub b: u32,
    pub generators: [BiPoly; 4],
    pub seed: Option<u64>,
    pub betti_box: Option<BiDeg>,
}

fn parse_pair(rest: &str, line: usize, column: usize, what: &str) -> Result<(u32, u32), CliError> {
    let nums: Vec<&str> = rest.split_whitespace().collect();
    match nums.as_slice() {
        [x, y] => match (x.parse(), y.parse()) {
            (Ok(x), Ok(y)) => Ok((x, y)),
            _ => Err(parse_error(line, column, format!("{what} needs two nonnegative integers"))),
        },
        _ => Err(parse_error(line, column, format!("{what} needs two nonnegative integers"))),
    }
}

impl SurfaceInput {
    pub fn new(a: u32, b: u32, generators: [BiPoly; 4]) -> Self {
        SurfaceInput {
            a,
            b,
            generators,
            seed: None,
            betti_box: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut bideg = None;
        let mut polys: [Option<(usize, usize, String)>; 4] = Default::default();
        let mut seed = None;
        let mut betti_box = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let Some((key, rest)) = body.split_once(':') else {
                return Err(parse_error(line, 1, "expected `key: value`"));
            };
            let col = key.len() + 2 + (rest.len() - rest.trim_start().len());
            match key.trim() {
                "bidegree" => bideg = Some(parse_pair(rest, line, col, "bidegree")?),
                "box" => betti_box = Some(parse_pair(rest, line, col, "box").map(|(m, n)| BiDeg::new(m, n))?),
                "seed" => {
                    seed = Some(
                        rest.trim()
                            .parse()
                            .map_err(|_| parse_error(line, col, "seed must be a nonnegative integer"))?,
                    )
                }
                k @ ("p0" | "p1" | "p2" | "p3") => {
                    let i = k[1..].parse::<usize>().unwrap();
                    if polys[i].is_some() {
                        return Err(parse_error(line, 1, format!("{k} given twice")));
                    }
                    polys[i] = Some((line, col, rest.trim().to_string()));
                }
                other => return Err(parse_error(line, 1, format!("unknown key `{other}`"))),
            }
        }
        let (a, b) = bideg.ok_or_else(|| parse_error(1, 1, "missing `bidegree: a b` line"))?;
        let d = BiDeg::new(a, b);
        let mut gens = Vec::with_capacity(4);
        for (i, p) in polys.into_iter().enumerate() {
            let (line, col, src) = p.ok_or_else(|| parse_error(1, 1, format!("missing p{i}")))?;
            let q = BiPoly::parse_with_deg(&src, d).map_err(|e| match e {
                Error::Parse { column, reason, .. } => parse_error(line, col + column - 1, reason),
                other => parse_error(line, col, other.to_string()),
            })?;
            gens.push(q);
        }
        Ok(SurfaceInput {
            a,
            b,
            generators: gens.try_into().expect("four generators"),
            seed,
            betti_box,
        })
    }

    pub fn surface(&self) -> Result<TPSurface, CliError> {
        Ok(TPSurface::new(self.a, self.b, self.generators.clone())?)
    }

    /// Text in the input format; parses back to `self`.
    pub fn render(&self) -> String {
        let mut out = format!("bidegree: {} {}\n", self.a, self.b);
        for (i, p) in self.generators.iter().enumerate() {
            let _ = writeln!(out, "p{i}: {p}");
        }
        if let Some(s) = self.seed {
            let _ = writeln!(out, "seed: {s}");
        }
        if let Some(bx) = self.betti_box {
            let _ = writeln!(out, "box: {} {}", bx.m, bx.n);
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Largest symbolic determinant attempted (`2ab`).
    pub max_det: usize,
    /// Largest graded piece `dim R_(mu + (a,b))` entered by the betti search.
    pub max_strand: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_det: 24,
            max_strand: 600,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct AnalyzeOptions {
    pub seed: u64,
    pub betti_box: Option<BiDeg>,
    /// Interpolation determinant, no full-strand cross-check.
    pub fast_det: bool,
    pub allow_basepoints: bool,
    pub limits: Limits,
}

#[derive(Clone, Debug, Serialize)]
pub struct InputEcho {
    pub bidegree: [u32; 2],
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearSyzygyReport {
    pub bidegree: [u32; 2],
    pub orientation: Orientation,
    pub vector: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizedReport {
    pub p: String,
    /// `pu, pv, p2, p3` in the input variables.
    pub generators: Vec<String>,
    /// Original generators reused as `p2`, `p3`.
    pub completion: [usize; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct StrandReport {
    pub nu: [u32; 2],
    pub rows: usize,
    pub cols: usize,
    pub route: Route,
}

#[derive(Clone, Debug, Serialize)]
pub struct ImplicitReport {
    pub equation: String,
    pub degree: u32,
    pub k: u32,
    /// `det = scalar * F^k`.
    pub scalar: String,
    pub composition_verified: Option<bool>,
    pub cross_check: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LineReport {
    pub forms: Vec<String>,
    pub det_order: u32,
    pub f_order: u32,
    pub bound: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiReport {
    #[serde(rename = "box")]
    pub bx: [u32; 2],
    /// Coefficient bidegrees of minimal first syzygies.
    pub generators: Vec<[u32; 2]>,
    /// Resolution shifts `-(mu + (a,b))`.
    pub shifts: Vec<[i64; 2]>,
    /// Shifts grouped with multiplicities, e.g. `(-4,-3)^2`.
    pub display: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub code: String,
    pub message: String,
    pub exit_code: i32,
}

/// Everything `analyze` learned. Fields after the first failing stage stay
/// empty and `error` says why.
#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub input: InputEcho,
    pub basepoints: Option<BasepointReport>,
    pub linear_syzygy: Option<LinearSyzygyReport>,
    pub normalized: Option<NormalizedReport>,
    pub special_pair: Option<Vec<Vec<String>>>,
    pub strand: Option<StrandReport>,
    pub implicit: Option<ImplicitReport>,
    pub singular_line: Option<LineReport>,
    pub p_class: Option<P22Class>,
    pub syzygy_generators: Option<BettiReport>,
    pub error: Option<ErrorReport>,
    /// Milliseconds per stage; excluded from the determinism contract.
    pub timings: BTreeMap<String, f64>,
}

impl AnalysisReport {
    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().map_or(0, |e| e.exit_code)
    }

    pub fn to_json(&self, timings: bool) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !timings {
            v.as_object_mut().unwrap().remove("timings");
        }
        serde_json::to_string_pretty(&v).unwrap()
    }
}

fn strings(p: &[BiPoly]) -> Vec<String> {
    p.iter().map(|q| q.to_string()).collect()
}

fn pair(d: BiDeg) -> [u32; 2] {
    [d.m, d.n]
}

/// Stage timer. The browser build has no monotonic clock, so there the
/// timings block stays empty.
struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    t: std::time::Instant,
}

impl Stopwatch {
    fn start() -> Self {
        Stopwatch {
            #[cfg(not(target_arch = "wasm32"))]
            t: std::time::Instant::now(),
        }
    }

    #[cfg(not(target_arch = "wasm32"))]
    fn lap(&mut self, timings: &mut BTreeMap<String, f64>, key: &str) {
        let ms = self.t.elapsed().as_secs_f64() * 1000.0;
        timings.insert(key.into(), (ms * 1000.0).round() / 1000.0);
        self.t = std::time::Instant::now();
    }

    #[cfg(target_arch = "wasm32")]
    fn lap(&mut self, _: &mut BTreeMap<String, f64>, _: &str) {}
}

pub fn cmd_analyze(input: &SurfaceInput, opts: &AnalyzeOptions) -> AnalysisReport {
    let mut report = AnalysisReport {
        input: InputEcho {
            bidegree: [input.a, input.b],
            generators: strings(&input.generators),
        },
        basepoints: None,
        linear_syzygy: None,
        normalized: None,
        special_pair: None,
        strand: None,
        implicit: None,
        singular_line: None,
        p_class: None,
        syzygy_generators: None,
        error: None,
        timings: BTreeMap::new(),
    };
    if let Err(e) = analyze_into(input, opts, &mut report) {
        report.error = Some(ErrorReport {
            code: e.code().into(),
            message: e.to_string(),
            exit_code: e.exit_code(),
        });
    }
    report
}

fn analyze_into(input: &SurfaceInput, opts: &AnalyzeOptions, r: &mut AnalysisReport) -> Result<(), CliError> {
    let s = input.surface()?;
    let (a, b) = (s.a(), s.b());
    let mut sw = Stopwatch::start();

    let bp = basepoint_check(&s, opts.seed);
    sw.lap(&mut r.timings, "basepoints");
    let free = bp.free;
    let label = bp.certificate.label();
    r.basepoints = Some(bp);
    if !free && !opts.allow_basepoints {
        return Err(Error::Basepoints(label).into());
    }

    if let Some(bx) = opts.betti_box {
        r.syzygy_generators = Some(betti_report(&s, bx, &opts.limits)?);
        sw.lap(&mut r.timings, "syzygy_generators");
    }

    let lin = detect_linear_syzygy(&s)?;
    sw.lap(&mut r.timings, "linear_syzygy");
    if let Some(l) = &lin {
        r.linear_syzygy = Some(LinearSyzygyReport {
            bidegree: pair(l.syzygy.mu),
            orientation: l.orientation,
            vector: strings(&l.syzygy.g),
        });
        if a >= 2 && b >= 2 {
            let n = normalize_linear(&s, l)?;
            r.normalized = Some(NormalizedReport {
                p: n.p_original().to_string(),
                generators: strings(&n.generators_original()),
                completion: [n.completion.0, n.completion.1],
            });
            if n.deg == BiDeg::new(2, 2) {
                r.p_class = Some(classify_p22(&n.p)?);
            }
            let (s1, s2) = special_pair(&n)?;
            let back = |v: &tpsurf::SyzygyVector| match n.orientation {
                Orientation::UV => strings(&v.g),
                Orientation::ST => strings(&v.swap().g),
            };
            r.special_pair = Some(vec![back(&s1), back(&s2)]);
            let m = build_d1_nu(&n, &n.linear_syzygy(), &s1, &s2)?;
            r.strand = Some(StrandReport {
                nu: [2 * n.deg.m - 1, n.deg.n - 1],
                rows: m.rows(),
                cols: m.cols(),
                route: Route::ThreeSyzygy,
            });
            sw.lap(&mut r.timings, "normalize");
        }
    }

    let size = (2 * a * b) as usize;
    if size > opts.limits.max_det {
        return Err(CliError::WorkLimit(format!(
            "strand matrix would be {size}x{size}, above the limit {}",
            opts.limits.max_det
        )));
    }
    let iopts = ImplicitOptions {
        backend: if opts.fast_det { DetBackend::Interpolation } else { DetBackend::Auto },
        cross_check: !opts.fast_det,
        verify_composition: true,
        seed: opts.seed,
    };
    let res = implicitize(&s, &iopts)?;
    sw.lap(&mut r.timings, "implicitize");
    if r.strand.is_none() {
        r.strand = Some(StrandReport {
            nu: pair(res.nu),
            rows: res.matrix.rows(),
            cols: res.matrix.cols(),
            route: res.route,
        });
    }
    r.implicit = Some(ImplicitReport {
        equation: res.f.to_string(),
        degree: res.f.deg(),
        k: res.k,
        scalar: res.scalar.to_string(),
        composition_verified: res.composition_verified,
        cross_check: res.cross_check,
    });
    r.singular_line = res.singular_line.map(|l| LineReport {
        forms: l.forms.iter().map(XPoly::to_string).collect(),
        det_order: l.det_order,
        f_order: l.f_order,
        bound: l.bound,
    });
    if res.composition_verified == Some(false) {
        return Err(CliError::Failed("implicit equation does not vanish on the parametrization".into()));
    }
    Ok(())
}

fn betti_report(s: &TPSurface, bx: BiDeg, limits: &Limits) -> Result<BettiReport, CliError> {
    let top = BiDeg::new(bx.m + s.a(), bx.n + s.b()).dim();
    if top > limits.max_strand {
        return Err(CliError::WorkLimit(format!(
            "box {bx} reaches a graded piece of dimension {top}, above the limit {}",
            limits.max_strand
        )));
    }
    let gens = min_syz_generators(s, bx);
    let shifts: Vec<[i64; 2]> = gens
        .iter()
        .map(|d| [-((d.m + s.a()) as i64), -((d.n + s.b()) as i64)])
        .collect();
    let mut grouped: Vec<([i64; 2], usize)> = Vec::new();
    for sh in &shifts {
        match grouped.iter_mut().find(|(x, _)| x == sh) {
            Some((_, c)) => *c += 1,
            None => grouped.push((*sh, 1)),
        }
    }
    let display = grouped
        .iter()
        .map(|(x, c)| {
            if *c == 1 {
                format!("({},{})", x[0], x[1])
            } else {
                format!("({},{})^{c}", x[0], x[1])
            }
        })
        .collect::<Vec<_>>()
        .join(", ");
    Ok(BettiReport {
        bx: pair(bx),
        generators: gens.iter().map(|&d| pair(d)).collect(),
        shifts,
        display,
    })
}

pub fn cmd_betti(input: &SurfaceInput, bx: BiDeg, limits: &Limits) -> Result<BettiReport, CliError> {
    betti_report(&input.surface()?, bx, limits)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomMode {
    WithLinearSyzygy,
    Dense,
}

impl std::str::FromStr for RandomMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "with-linear-syzygy" | "linear" => Ok(RandomMode::WithLinearSyzygy),
            "dense" => Ok(RandomMode::Dense),
            _ => Err(format!("unknown mode `{s}` (with-linear-syzygy | dense)")),
        }
    }
}

pub fn cmd_random(a: u32, b: u32, mode: RandomMode, seed: u64) -> Result<SurfaceInput, CliError> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidSurface("a and b must be at least 1".into()).into());
    }
    let d = BiDeg::new(a, b);
    let gens = match mode {
        RandomMode::WithLinearSyzygy => {
            let p = BiPoly::random_form(BiDeg::new(a, b - 1), seed);
            [
                &p * &BiPoly::u(),
                &p * &BiPoly::v(),
                BiPoly::random_form(d, seed.wrapping_add(1)),
                BiPoly::random_form(d, seed.wrapping_add(2)),
            ]
        }
        RandomMode::Dense => std::array::from_fn(|i| BiPoly::random_form(d, seed.wrapping_add(i as u64))),
    };
    let mut out = SurfaceInput::new(a, b, gens);
    out.seed = Some(seed);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub equation: String,
    pub degree: u32,
    pub vanishes: bool,
    /// `deg F` divides `2ab`.
    pub degree_divides: bool,
}

pub fn cmd_verify(input: &SurfaceInput, f: &str) -> Result<VerifyReport, CliError> {
    let s = input.surface()?;
    let f: XPoly = f.parse()?;
    let expected = 2 * s.a() * s.b();
    Ok(VerifyReport {
        equation: f.to_string(),
        degree: f.deg(),
        vanishes: !f.is_zero() && f.substitute(s.generators()).is_zero(),
        degree_divides: f.deg() > 0 && expected % f.deg() == 0,
    })
}

/// Plain-text rendering of an analysis report.
pub fn render_analysis(r: &AnalysisReport, timings: bool) -> String {
    let mut o = String::new();
    let [a, b] = r.input.bidegree;
    let _ = writeln!(o, "surface of bidegree ({a},{b})");
    for (i, g) in r.input.generators.iter().enumerate() {
        let _ = writeln!(o, "  p{i} = {g}");
    }
    if let Some(bp) = &r.basepoints {
        let _ = writeln!(
            o,
            "basepoints: {} ({})",
            if bp.free { "none" } else { "present" },
            bp.certificate.label()
        );
    }
    match &r.linear_syzygy {
        Some(l) => {
            let _ = writeln!(
                o,
                "linear syzygy: bidegree ({},{}) [{}]",
                l.bidegree[0],
                l.bidegree[1],
                l.vector.join(", ")
            );
        }
        None if r.basepoints.as_ref().is_some_and(|b| b.free) && r.error.is_none() => {
            let _ = writeln!(o, "linear syzygy: none");
        }
        None => {}
    }
    if let Some(n) = &r.normalized {
        let _ = writeln!(o, "p = {}", n.p);
    }
    if let Some(c) = &r.p_class {
        let _ = writeln!(o, "p class: {c:?}");
    }
    if let Some(sp) = &r.special_pair {
        for (i, v) in sp.iter().enumerate() {
            let _ = writeln!(o, "S{} = [{}]", i + 1, v.join(", "));
        }
    }
    if let Some(st) = &r.strand {
        let _ = writeln!(
            o,
            "strand ({},{}): {}x{} ({:?})",
            st.nu[0], st.nu[1], st.rows, st.cols, st.route
        );
    }
    if let Some(i) = &r.implicit {
        let _ = writeln!(o, "implicit equation (degree {}): {}", i.degree, i.equation);
        let _ = writeln!(o, "det = {} * F^{}", i.scalar, i.k);
    }
    if let Some(l) = &r.singular_line {
        let _ = writeln!(
            o,
            "singular line V({}): det order {}, F order {}, bound {}",
            l.forms.join(", "),
            l.det_order,
            l.f_order,
            l.bound
        );
    }
    if let Some(g) = &r.syzygy_generators {
        let _ = writeln!(o, "first syzygies in box ({},{}): {}", g.bx[0], g.bx[1], g.display);
    }
    if let Some(e) = &r.error {
        let _ = writeln!(o, "error [{}]: {}", e.code, e.message);
    }
    if timings && !r.timings.is_empty() {
        let t: Vec<String> = r.timings.iter().map(|(k, v)| format!("{k} {v:.1}ms")).collect();
        let _ = writeln!(o, "timings: {}", t.join(", "));
    }
    o
}
