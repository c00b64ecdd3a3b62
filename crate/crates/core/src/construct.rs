//! Sequence families and the `#PRSFAM v1` text format.
//!
//! Symbols are stored as indices in `[0, k)`. Binary families use `k = 2`
//! with `0 <-> +1` and `1 <-> -1`, so a Legendre symbol `+1` is stored as 0.

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use num_integer::Integer;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ff::{self, check_odd_prime, legendre_unchecked, CharTable};
use crate::poly::{self, Polynomial};

pub type Symbol = u32;

/// How a family was produced. Serialized as the `construction=` tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    F1,
    F2,
    KSymbol,
    Dual(Box<Construction>),
    External,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::F1 => write!(f, "f1"),
            Construction::F2 => write!(f, "f2"),
            Construction::KSymbol => write!(f, "ksym"),
            Construction::Dual(inner) => write!(f, "dual({inner})"),
            Construction::External => write!(f, "external"),
        }
    }
}

impl FromStr for Construction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "f1" => Ok(Construction::F1),
            "f2" => Ok(Construction::F2),
            "ksym" => Ok(Construction::KSymbol),
            "external" => Ok(Construction::External),
            _ => s
                .strip_prefix("dual(")
                .and_then(|rest| rest.strip_suffix(')'))
                .ok_or_else(|| format!("unknown construction tag `{s}`"))
                .and_then(|inner| Ok(Construction::Dual(Box::new(inner.parse()?)))),
        }
    }
}

impl Construction {
    /// The construction with all `dual(...)` wrappers removed.
    pub fn base_tag(&self) -> &Construction {
        match self {
            Construction::Dual(inner) => inner.base_tag(),
            other => other,
        }
    }

    pub fn is_dual(&self) -> bool {
        matches!(self, Construction::Dual(_))
    }
}

/// `F` sequences of common length `N` over the alphabet `[0, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    p: u64,
    d: usize,
    k: u32,
    rows: Vec<Vec<Symbol>>,
    construction: Construction,
    /// Base polynomial of an `f1` family; not part of the file format.
    base: Option<Polynomial>,
}

impl Family {
    pub fn new(
        p: u64,
        d: usize,
        k: u32,
        rows: Vec<Vec<Symbol>>,
        construction: Construction,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("alphabet size k must be at least 1"));
        }
        let n = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || n == 0 {
            return Err(Error::param("a family needs at least one row of positive length"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::param(format!(
                    "row {} has length {} but row 1 has length {n}",
                    i + 1,
                    row.len()
                )));
            }
            if let Some(s) = row.iter().find(|&&s| s >= k) {
                return Err(Error::param(format!(
                    "row {} contains symbol {s} outside [0, {k})",
                    i + 1
                )));
            }
        }
        Ok(Family {
            p,
            d,
            k,
            rows,
            construction,
            base: None,
        })
    }

    /// A family with no construction context (`p = d = 0`, tag `external`).
    pub fn external(k: u32, rows: Vec<Vec<Symbol>>) -> Result<Self> {
        Self::new(0, 0, k, rows, Construction::External)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Family size `F`.
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Sequence length `N`.
    pub fn length(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<Symbol>] {
        &self.rows
    }

    /// Row `i` (0-based).
    pub fn row(&self, i: usize) -> &[Symbol] {
        &self.rows[i]
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn base(&self) -> Option<&Polynomial> {
        self.base.as_ref()
    }

    pub fn is_binary(&self) -> bool {
        self.k == 2
    }

    /// All pairs `(i, j)`, `i < j`, of 0-based row indices holding equal sequences.
    pub fn duplicate_rows(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.rows.len() {
            for j in i + 1..self.rows.len() {
                if self.rows[i] == self.rows[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn rows_distinct(&self) -> bool {
        self.duplicate_rows().is_empty()
    }

    /// Class label per row: rows with equal contents share a label.
    pub(crate) fn row_classes(&self) -> Vec<usize> {
        (0..self.rows.len())
            .map(|i| (0..=i).find(|&j| self.rows[j] == self.rows[i]).unwrap())
            .collect()
    }

    /// Whether some row matches `pattern`.
    pub fn realizes(&self, pattern: &SpecificationPattern) -> bool {
        self.rows.iter().any(|row| {
            pattern
                .positions
                .iter()
                .zip(&pattern.symbols)
                .all(|(&pos, &s)| row[pos - 1] == s)
        })
    }
}

/// Binary symbol to `+1 / -1`.
pub fn sign(symbol: Symbol) -> i64 {
    if symbol == 0 {
        1
    } else {
        -1
    }
}

/// Positions `1 <= i_1 < ... < i_j <= N` with prescribed symbols.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SpecificationPattern {
    pub positions: Vec<usize>,
    pub symbols: Vec<Symbol>,
}

impl SpecificationPattern {
    pub fn new(positions: Vec<usize>, symbols: Vec<Symbol>) -> Result<Self> {
        if positions.len() != symbols.len() {
            return Err(Error::param("positions and symbols differ in length"));
        }
        if positions.first() == Some(&0) || positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("positions must be 1-based and strictly increasing"));
        }
        Ok(SpecificationPattern { positions, symbols })
    }
}

fn encode_legendre(value: u64, p: u64) -> Result<Symbol> {
    match legendre_unchecked(value, p) {
        1 => Ok(0),
        -1 => Ok(1),
        _ => Err(Error::Internal(format!(
            "zero polynomial value modulo {p} in an irreducible construction"
        ))),
    }
}

fn legendre_row(f: &Polynomial, p: u64) -> Result<Vec<Symbol>> {
    (1..p).map(|n| encode_legendre(f.eval(n, p), p)).collect()
}

/// Checks the hypotheses on the base polynomial of the scaled family.
fn validate_f1_base(f: &Polynomial, p: u64, d: usize) -> Result<()> {
    if !f.is_monic() || f.degree() != Some(d) {
        return Err(Error::param(format!("base {f} must be monic of degree {d}")));
    }
    if f.a(1) != 0 {
        return Err(Error::param(format!(
            "base {f} must have zero x^{} coefficient",
            d - 1
        )));
    }
    if f.a(2) == 0 {
        return Err(Error::param(format!("base {f} needs a_2 != 0")));
    }
    if f.a(3) == 0 {
        return Err(Error::param(format!("base {f} needs a_3 != 0")));
    }
    if !poly::is_irreducible(f, p)? {
        return Err(Error::param(format!("base {f} is reducible over F_{p}")));
    }
    Ok(())
}

/// First irreducible `x^d + a_2 x^{d-2} + ... + a_d` with `a_2, a_3 != 0`,
/// in lexicographic order of `(a_2, ..., a_d)`.
pub fn default_f1_base(p: u64, d: usize, budget: Budget) -> Result<Polynomial> {
    check_odd_prime(p)?;
    if d < 5 {
        return Err(Error::param(format!("degree d = {d} must be at least 5")));
    }
    let total = (p as u128).saturating_pow(d as u32 - 1);
    let scan = total.min(budget.limit);
    for index in 0..scan {
        let digits = poly::digits(index, p, d - 1);
        if digits[0] == 0 || digits[1] == 0 {
            continue;
        }
        let mut tail = vec![0];
        tail.extend(digits);
        let f = Polynomial::monic_from_tail(&tail, p);
        if poly::is_irreducible(&f, p)? {
            return Ok(f);
        }
    }
    if scan < total {
        Err(Error::Budget {
            what: format!("search for an irreducible degree-{d} base over F_{p}"),
            estimate: total,
            limit: budget.limit,
            certified: None,
        })
    } else {
        Err(Error::param(format!(
            "no admissible irreducible base of degree {d} over F_{p}"
        )))
    }
}

/// The family `{ ((f_i(n)/p))_{n=1}^{p-1} : i = 1..p-1 }` with `f_i(X) = i^d f(X/i)`.
///
/// Rows are ordered by `i`. Duplicate rows are not rejected here; see
/// [`Family::duplicate_rows`].
pub fn family_f1(p: u64, d: usize, base: Option<&Polynomial>, budget: Budget) -> Result<Family> {
    check_odd_prime(p)?;
    if d < 5 {
        return Err(Error::param(format!("degree d = {d} must be at least 5")));
    }
    if (d as u64).is_multiple_of(p) {
        return Err(Error::param(format!("p = {p} must not divide d = {d}")));
    }
    let base = match base {
        Some(f) => {
            validate_f1_base(f, p, d)?;
            f.clone()
        }
        None => default_f1_base(p, d, budget)?,
    };
    let rows = (1..p)
        .map(|i| legendre_row(&poly::scale_poly(&base, i, p)?, p))
        .collect::<Result<Vec<_>>>()?;
    let mut fam = Family::new(p, d, 2, rows, Construction::F1)?;
    fam.base = Some(base);
    Ok(fam)
}

/// Legendre sequences of the trace-zero monic irreducibles of degree `d`,
/// in lexicographic polynomial order.
pub fn family_f2(p: u64, d: usize, budget: Budget) -> Result<Family> {
    family_f2_with(p, d, true, budget)
}

/// As [`family_f2`]; with `trace_zero = false` every monic irreducible of
/// degree `d` contributes a row.
pub fn family_f2_with(p: u64, d: usize, trace_zero: bool, budget: Budget) -> Result<Family> {
    check_odd_prime(p)?;
    if d < 2 {
        return Err(Error::param(format!("degree d = {d} must be at least 2")));
    }
    let omega = if trace_zero {
        poly::enumerate_trace_zero_irreducibles(p, d, budget)?
    } else {
        poly::enumerate_irreducibles(p, d, budget)?
    };
    let rows = omega
        .iter()
        .map(|f| legendre_row(f, p))
        .collect::<Result<Vec<_>>>()?;
    Family::new(p, d, 2, rows, Construction::F2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KSymbolOptions {
    /// Require `gcd(k, (p^d - 1)/(p - 1)) = 1`. `k | p - 1` is always required
    /// because the character must exist.
    pub enforce_norm_gcd: bool,
}

impl Default for KSymbolOptions {
    fn default() -> Self {
        KSymbolOptions {
            enforce_norm_gcd: true,
        }
    }
}

/// Order-`k` character sequences `(chi(f_beta(n)))_{n=1}^{p-1}` over the
/// trace-zero conjugacy classes of `F_{p^d} \ F_p`, in representative order.
pub fn family_k_symbol(
    p: u64,
    d: usize,
    k: u32,
    options: KSymbolOptions,
    budget: Budget,
) -> Result<Family> {
    check_odd_prime(p)?;
    if !ff::is_prime(d as u64) {
        return Err(Error::param(format!("degree d = {d} must be prime")));
    }
    if k < 2 {
        return Err(Error::param(format!("alphabet size k = {k} must be at least 2")));
    }
    if !(p - 1).is_multiple_of(k as u64) {
        return Err(Error::param(format!(
            "k = {k} must divide p - 1 = {}",
            p - 1
        )));
    }
    let norm_degree = ((p as u128).pow(d as u32) - 1) / (p as u128 - 1);
    let g = (k as u128).gcd(&norm_degree);
    if options.enforce_norm_gcd && g != 1 {
        return Err(Error::param(format!(
            "gcd(k, (p^d-1)/(p-1)) = gcd({k}, {norm_degree}) = {g}, must be 1"
        )));
    }
    let table = CharTable::new(p, k)?;
    let reps = poly::conjugacy_representatives(p, d, true, budget)?;
    let rows = reps
        .iter()
        .map(|beta| {
            let f = poly::minimal_polynomial(beta)?;
            (1..p)
                .map(|n| {
                    table.index(f.eval(n, p)).map_err(|_| {
                        Error::Internal(format!("f_beta({n}) = 0 for irreducible {f}"))
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Family::new(p, d, k, rows, Construction::KSymbol)
}

/// Transpose: row `n` of the dual is column `n` of `fam`.
pub fn dual(fam: &Family) -> Family {
    let (f, n) = (fam.size(), fam.length());
    let rows = (0..n)
        .map(|col| (0..f).map(|row| fam.rows[row][col]).collect())
        .collect();
    let construction = match &fam.construction {
        Construction::Dual(inner) => (**inner).clone(),
        other => Construction::Dual(Box::new(other.clone())),
    };
    Family {
        p: fam.p,
        d: fam.d,
        k: fam.k,
        rows,
        construction,
        base: fam.base.clone(),
    }
}

const MAGIC: &str = "#PRSFAM";
const VERSION: &str = "v1";

pub fn write_family<W: Write>(fam: &Family, mut sink: W) -> io::Result<()> {
    writeln!(
        sink,
        "{MAGIC} {VERSION} p={} d={} k={} N={} F={} construction={}",
        fam.p,
        fam.d,
        fam.k,
        fam.length(),
        fam.size(),
        fam.construction
    )?;
    let mut line = String::new();
    for row in &fam.rows {
        line.clear();
        for (i, s) in row.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&s.to_string());
        }
        line.push('\n');
        sink.write_all(line.as_bytes())?;
    }
    sink.flush()
}

pub fn write_family_file(fam: &Family, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    write_family(fam, BufWriter::new(file)).map_err(io_err)
}

struct Header {
    p: u64,
    d: usize,
    k: u32,
    n: usize,
    f: usize,
    construction: Construction,
}

fn parse_header(line: &str) -> Result<Header> {
    let tokens: Vec<&str> = line.split(' ').collect();
    if tokens.len() != 8 || tokens[0] != MAGIC || tokens[1] != VERSION {
        return Err(Error::parse(1, format!("expected `{MAGIC} {VERSION} p=.. d=.. k=.. N=.. F=.. construction=..`")));
    }
    fn field<'a>(token: &'a str, key: &str) -> Result<&'a str> {
        token
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| Error::parse(1, format!("expected `{key}=` but found `{token}`")))
    }
    fn number<T: FromStr>(token: &str, key: &str) -> Result<T> {
        field(token, key)?
            .parse()
            .map_err(|_| Error::parse(1, format!("`{token}` is not a valid {key}")))
    }
    let construction = field(tokens[7], "construction")?
        .parse()
        .map_err(|e: String| Error::parse(1, e))?;
    Ok(Header {
        p: number(tokens[2], "p")?,
        d: number(tokens[3], "d")?,
        k: number(tokens[4], "k")?,
        n: number(tokens[5], "N")?,
        f: number(tokens[6], "F")?,
        construction,
    })
}

pub fn read_family<R: BufRead>(source: R) -> Result<Family> {
    let mut lines = source.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => parse_header(&line.map_err(|e| Error::parse(1, e.to_string()))?)?,
        None => return Err(Error::parse(1, "empty input")),
    };
    if header.k == 0 || header.n == 0 || header.f == 0 {
        return Err(Error::parse(1, "k, N and F must all be positive"));
    }
    let mut rows = Vec::with_capacity(header.f);
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        if rows.len() == header.f {
            return Err(Error::parse(
                lineno,
                format!("header declares F={} rows but more follow", header.f),
            ));
        }
        let row = line
            .split(' ')
            .map(|tok| {
                let s: Symbol = tok
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("`{tok}` is not a symbol")))?;
                if s >= header.k {
                    return Err(Error::parse(
                        lineno,
                        format!("symbol {s} outside alphabet [0, {})", header.k),
                    ));
                }
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != header.n {
            return Err(Error::parse(
                lineno,
                format!("row has {} symbols, header declares N={}", row.len(), header.n),
            ));
        }
        rows.push(row);
    }
    if rows.len() != header.f {
        return Err(Error::parse(
            rows.len() + 2,
            format!("header declares F={} rows but {} present", header.f, rows.len()),
        ));
    }
    Family::new(header.p, header.d, header.k, rows, header.construction)
}

pub fn read_family_file(path: &Path) -> Result<Family> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_family(BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b() -> Budget {
        Budget::ENUMERATION
    }

    #[test]
    fn f1_shape_and_base_row() {
        let fam = family_f1(11, 5, None, b()).unwrap();
        assert_eq!((fam.size(), fam.length(), fam.k()), (10, 10, 2));
        let base = fam.base().unwrap().clone();
        assert_eq!(base, Polynomial::from_high_first(&[1, 0, 1, 1, 0, 4], 11));
        assert_eq!(fam.row(0), legendre_row(&base, 11).unwrap().as_slice());
        assert!(fam.rows_distinct());
        assert_eq!(fam.duplicate_rows().len(), 0);
    }

    #[test]
    fn f1_rejects_bad_parameters() {
        assert!(matches!(family_f1(11, 4, None, b()), Err(Error::Parameter(_))));
        assert!(matches!(family_f1(5, 5, None, b()), Err(Error::Parameter(_))));
        assert!(matches!(family_f1(9, 5, None, b()), Err(Error::Parameter(_))));
        let a2_zero = Polynomial::from_high_first(&[1, 0, 0, 1, 0, 4], 11);
        let err = family_f1(11, 5, Some(&a2_zero), b()).unwrap_err().to_string();
        assert!(err.contains("a_2"), "{err}");
        let a1 = Polynomial::from_high_first(&[1, 1, 1, 1, 0, 4], 11);
        assert!(family_f1(11, 5, Some(&a1), b()).is_err());
        // x^5 + x^3 + x^2 + 1 = (x + 1)(x^4 - x^3 + 2x^2 - x + 1) has a root at -1.
        let reducible = Polynomial::from_high_first(&[1, 0, 1, 1, 0, 1], 11);
        let err = family_f1(11, 5, Some(&reducible), b()).unwrap_err().to_string();
        assert!(err.contains("reducible"), "{err}");
    }

    #[test]
    fn f1_base_search_respects_budget() {
        assert!(matches!(
            default_f1_base(11, 5, Budget::new(10)),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn f2_examples() {
        let fam = family_f2(3, 2, b()).unwrap();
        assert_eq!(fam.rows(), &[vec![1, 1]]);
        let fam = family_f2(5, 3, b()).unwrap();
        assert_eq!((fam.size(), fam.length()), (8, 4));
        let fam = family_f2(7, 2, b()).unwrap();
        assert_eq!(fam.size(), 3);
        assert!(fam.rows_distinct());
    }

    #[test]
    fn f2_duplicate_rows_at_p7_d3() {
        let fam = family_f2(7, 3, b()).unwrap();
        assert_eq!(fam.size(), 16);
        let omega = poly::enumerate_trace_zero_irreducibles(7, 3, b()).unwrap();
        let dups: Vec<(String, String)> = fam
            .duplicate_rows()
            .into_iter()
            .map(|(i, j)| (omega[i].to_string(), omega[j].to_string()))
            .collect();
        assert_eq!(dups, vec![("x^3 + 2".to_string(), "x^3 + 5".to_string())]);
    }

    #[test]
    fn f2_without_trace_filter() {
        let fam = family_f2_with(5, 2, false, b()).unwrap();
        assert_eq!(fam.size() as u128, poly::count_irreducibles(5, 2));
    }

    #[test]
    fn k_symbol_examples() {
        let opts = KSymbolOptions::default();
        let fam = family_k_symbol(5, 3, 2, opts, b()).unwrap();
        assert_eq!((fam.size(), fam.length()), (8, 4));
        let mut a = fam.rows().to_vec();
        let mut f2 = family_f2(5, 3, b()).unwrap().rows().to_vec();
        a.sort();
        f2.sort();
        assert_eq!(a, f2);

        let err = family_k_symbol(7, 3, 3, opts, b()).unwrap_err().to_string();
        assert!(err.contains("gcd(3, 57) = 3"), "{err}");
        let err = family_k_symbol(13, 3, 3, opts, b()).unwrap_err().to_string();
        assert!(err.contains("183"), "{err}");
        let fam = family_k_symbol(13, 2, 3, opts, b()).unwrap();
        assert_eq!(fam.size(), 6);
        assert!(fam.rows().iter().flatten().all(|&s| s < 3));
    }

    #[test]
    fn k_symbol_precondition_errors() {
        let opts = KSymbolOptions::default();
        assert!(family_k_symbol(7, 4, 3, opts, b()).unwrap_err().to_string().contains("prime"));
        assert!(family_k_symbol(7, 2, 4, opts, b()).unwrap_err().to_string().contains("divide"));
        assert!(family_k_symbol(13, 2, 2, opts, b()).is_err());
        let relaxed = KSymbolOptions { enforce_norm_gcd: false };
        assert_eq!(family_k_symbol(13, 2, 2, relaxed, b()).unwrap().size(), 6);
    }

    #[test]
    fn dual_examples() {
        let fam = family_f2(3, 2, b()).unwrap();
        let du = dual(&fam);
        assert_eq!(du.rows(), &[vec![1], vec![1]]);
        assert_eq!(du.construction().to_string(), "dual(f2)");
        assert_eq!(dual(&du), fam);
    }

    #[test]
    fn construction_tags_round_trip() {
        for tag in ["f1", "f2", "ksym", "external", "dual(f1)", "dual(dual(ksym))"] {
            assert_eq!(tag.parse::<Construction>().unwrap().to_string(), tag);
        }
        assert!("dual(f3)".parse::<Construction>().is_err());
        assert!("dual(f1".parse::<Construction>().is_err());
    }

    fn roundtrip(fam: &Family) -> Family {
        let mut buf = Vec::new();
        write_family(fam, &mut buf).unwrap();
        read_family(buf.as_slice()).unwrap()
    }

    #[test]
    fn file_format_is_exact() {
        let fam = family_f2(3, 2, b()).unwrap();
        let mut buf = Vec::new();
        write_family(&fam, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "#PRSFAM v1 p=3 d=2 k=2 N=2 F=1 construction=f2\n1 1\n"
        );
        let fam = family_f2(7, 2, b()).unwrap();
        assert_eq!(roundtrip(&fam), fam);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("#PRSFAM v2 p=3 d=2 k=2 N=2 F=1 construction=f2\n1 1\n", 1),
            ("#PRSFAM v1 p=3 d=2 k=2 N=2 F=1 construction=f9\n1 1\n", 1),
            ("#PRSFAM v1 p=3 d=2 k=2 N=2 F=1 construction=f2\n1 2\n", 2),
            ("#PRSFAM v1 p=3 d=2 k=2 N=2 F=2 construction=f2\n1 1\n0 1 1\n", 3),
            ("#PRSFAM v1 p=3 d=2 k=2 N=2 F=3 construction=f2\n1 1\n0 1\n", 4),
            ("#PRSFAM v1 p=3 d=2 k=2 N=2 F=1 construction=f2\n1 1\n0 0\n", 3),
            ("#PRSFAM v1 p=3 d=2 k=2 N=2 F=1 construction=f2\n1  1\n", 2),
            ("", 1),
        ];
        for (text, line) in cases {
            match read_family(text.as_bytes()) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn realizes_pattern() {
        let fam = Family::external(2, vec![vec![0, 0], vec![1, 1]]).unwrap();
        assert!(fam.realizes(&SpecificationPattern::new(vec![1, 2], vec![1, 1]).unwrap()));
        assert!(!fam.realizes(&SpecificationPattern::new(vec![1, 2], vec![0, 1]).unwrap()));
        assert!(SpecificationPattern::new(vec![2, 1], vec![0, 0]).is_err());
        assert!(SpecificationPattern::new(vec![0], vec![0]).is_err());
    }

    fn arb_family() -> impl Strategy<Value = Family> {
        (1u32..4, 1usize..6, 1usize..9).prop_flat_map(|(k, f, n)| {
            proptest::collection::vec(proptest::collection::vec(0..k, n), f)
                .prop_map(move |rows| Family::external(k, rows).unwrap())
        })
    }

    proptest! {
        #[test]
        fn dual_is_an_involution(fam in arb_family()) {
            let du = dual(&fam);
            prop_assert_eq!(du.size(), fam.length());
            let mut a: Vec<Symbol> = fam.rows().concat();
            let mut b: Vec<Symbol> = du.rows().concat();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
            prop_assert_eq!(dual(&du), fam);
        }

        #[test]
        fn serialization_round_trips(fam in arb_family()) {
            prop_assert_eq!(roundtrip(&fam), fam.clone());
            prop_assert_eq!(roundtrip(&dual(&fam)), dual(&fam));
        }
    }
}
