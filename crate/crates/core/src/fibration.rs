//! Kodaira fiber bookkeeping: Euler number, Shioda–Tate rank and the
//! Mordell–Weil discriminant formula.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Singular fiber types of an elliptic surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KodairaType {
    /// `I_n`, `n ≥ 1`.
    I(u32),
    /// `I*_n`, `n ≥ 0`.
    IStar(u32),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    /// Topological Euler number of the fiber.
    pub fn chi(self) -> u32 {
        match self {
            KodairaType::I(n) => n,
            KodairaType::IStar(n) => n + 6,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    /// Number of irreducible components.
    pub fn components(self) -> u32 {
        match self {
            KodairaType::I(n) => n,
            KodairaType::IStar(n) => n + 5,
            KodairaType::II => 1,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }

    /// Number of simple (multiplicity one) components, the order of the
    /// component group.
    pub fn simple_components(self) -> u32 {
        match self {
            KodairaType::I(n) => n,
            KodairaType::IStar(_) => 4,
            KodairaType::II => 1,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::IVStar => 3,
            KodairaType::IIIStar => 2,
            KodairaType::IIStar => 1,
        }
    }

    pub const ADDITIVE_EXCEPTIONAL: [KodairaType; 6] = [
        KodairaType::II,
        KodairaType::III,
        KodairaType::IV,
        KodairaType::IVStar,
        KodairaType::IIIStar,
        KodairaType::IIStar,
    ];
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::II => f.write_str("II"),
            KodairaType::III => f.write_str("III"),
            KodairaType::IV => f.write_str("IV"),
            KodairaType::IVStar => f.write_str("IV*"),
            KodairaType::IIIStar => f.write_str("III*"),
            KodairaType::IIStar => f.write_str("II*"),
        }
    }
}

impl Serialize for KodairaType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts `I5`, `I5*`, `I*5`, `I0*`, `II`, `III`, `IV` and their starred forms.
impl FromStr for KodairaType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown Kodaira type {s:?}"));
        let t = s.trim();
        let named = match t {
            "II" => Some(KodairaType::II),
            "III" => Some(KodairaType::III),
            "IV" => Some(KodairaType::IV),
            "IV*" => Some(KodairaType::IVStar),
            "III*" => Some(KodairaType::IIIStar),
            "II*" => Some(KodairaType::IIStar),
            _ => None,
        };
        if let Some(k) = named {
            return Ok(k);
        }
        let rest = t.strip_prefix('I').ok_or_else(bad)?;
        let (digits, star) = if let Some(d) = rest.strip_prefix('*') {
            (d, true)
        } else if let Some(d) = rest.strip_suffix('*') {
            (d, true)
        } else {
            (rest, false)
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let n: u32 = digits.parse().map_err(|_| bad())?;
        match (star, n) {
            (true, n) => Ok(KodairaType::IStar(n)),
            (false, 0) => Err(Error::Parse("I0 is a smooth fiber".into())),
            (false, n) => Ok(KodairaType::I(n)),
        }
    }
}

/// Parses a comma-separated list such as `6I2,I5*,I1`; a leading count
/// repeats the fiber.
pub fn parse_fibers(s: &str) -> Result<Vec<KodairaType>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let split = item.find(|c: char| !c.is_ascii_digit()).unwrap_or(item.len());
        let (count, kind) = item.split_at(split);
        let count: usize = if count.is_empty() {
            1
        } else {
            count.parse().map_err(|_| Error::Parse(format!("bad multiplicity in {item:?}")))?
        };
        let k: KodairaType = kind.parse()?;
        out.extend(std::iter::repeat_n(k, count));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberConfiguration {
    pub fibers: Vec<KodairaType>,
    pub ns_rank: u32,
    pub has_section: bool,
    pub mw_order: Option<u64>,
    pub mw_rank_expected: Option<i64>,
}

impl FiberConfiguration {
    pub fn new(fibers: Vec<KodairaType>, ns_rank: u32) -> Self {
        FiberConfiguration { fibers, ns_rank, has_section: false, mw_order: None, mw_rank_expected: None }
    }

    pub fn with_section(mut self, mw_order: Option<u64>) -> Self {
        self.has_section = true;
        self.mw_order = mw_order;
        self
    }

    pub fn euler_sum(&self) -> u32 {
        self.fibers.iter().map(|f| f.chi()).sum()
    }

    /// Fiber list in compact form, e.g. `6I2+I5*+I1`.
    pub fn describe(&self) -> String {
        let mut parts: Vec<(KodairaType, usize)> = Vec::new();
        for &f in &self.fibers {
            match parts.last_mut() {
                Some((g, n)) if *g == f => *n += 1,
                _ => parts.push((f, 1)),
            }
        }
        parts
            .iter()
            .map(|(f, n)| if *n == 1 { f.to_string() } else { format!("{n}{f}") })
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// `ρ - 2 - Σ(mᵢ - 1)`; negative values signal an impossible configuration.
pub fn shioda_tate_rank(config: &FiberConfiguration) -> Result<i64> {
    if !config.has_section {
        return Err(Error::NoSection);
    }
    let trivial: i64 = config.fibers.iter().map(|f| f.components() as i64 - 1).sum();
    Ok(config.ns_rank as i64 - 2 - trivial)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditItem {
    pub check: &'static str,
    pub value: String,
    pub expected: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub fibers: String,
    pub items: Vec<AuditItem>,
    pub pass: bool,
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fibers {}", self.fibers)?;
        for it in &self.items {
            let verdict = if it.pass { "pass" } else { "FAIL" };
            writeln!(f, "  {:<14} {:>6} expected {:<6} {verdict}", it.check, it.value, it.expected)?;
        }
        write!(f, "  overall {}", if self.pass { "pass" } else { "FAIL" })
    }
}

pub const EULER_K3: u32 = 24;

/// Euler number, Shioda–Tate rank (with a section) and, for finite
/// Mordell–Weil group of known order, `Πsᵢ/n²` against `expected_disc`.
pub fn audit(config: &FiberConfiguration, expected_disc: Option<u64>) -> AuditReport {
    let mut items = Vec::new();
    let chi = config.euler_sum();
    items.push(AuditItem { check: "euler", value: chi.to_string(), expected: EULER_K3.to_string(), pass: chi == EULER_K3 });
    if let Ok(rank) = shioda_tate_rank(config) {
        let expected = config.mw_rank_expected.unwrap_or(0);
        let mut pass = rank >= 0;
        let shown = if config.mw_rank_expected.is_some() || config.mw_order.is_some() {
            pass &= rank == expected;
            expected.to_string()
        } else {
            ">= 0".to_string()
        };
        items.push(AuditItem { check: "mw_rank", value: rank.to_string(), expected: shown, pass });
        if let (0, Some(n)) = (rank, config.mw_order) {
            let prod: u128 = config.fibers.iter().map(|f| f.simple_components() as u128).product();
            let disc = Ratio::new(prod, (n as u128) * (n as u128));
            let value = if disc.is_integer() { disc.to_integer().to_string() } else { disc.to_string() };
            let (expected, pass) = match expected_disc {
                Some(e) => (e.to_string(), disc == Ratio::from_integer(e as u128)),
                None => ("integer".to_string(), disc.is_integer()),
            };
            items.push(AuditItem { check: "discriminant", value, expected, pass });
        }
    }
    let pass = items.iter().all(|i| i.pass);
    AuditReport { fibers: config.describe(), items, pass }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        for n in 1..20 {
            let i = KodairaType::I(n);
            assert_eq!((i.chi(), i.components(), i.simple_components()), (n, n, n));
            let s = KodairaType::IStar(n);
            assert_eq!(s.components(), s.chi() - 1);
            assert_eq!(s.chi(), n + 6);
        }
        for k in KodairaType::ADDITIVE_EXCEPTIONAL {
            assert!(k.simple_components() <= k.components());
        }
    }

    #[test]
    fn parse_and_display() {
        let f = parse_fibers("6I2, I5*,I1").unwrap();
        assert_eq!(f.len(), 8);
        assert_eq!(f[6], KodairaType::IStar(5));
        assert_eq!("I*10".parse::<KodairaType>().unwrap(), KodairaType::IStar(10));
        assert_eq!("IV*".parse::<KodairaType>().unwrap(), KodairaType::IVStar);
        assert!("I0".parse::<KodairaType>().is_err());
        assert!("V".parse::<KodairaType>().is_err());
        assert_eq!(FiberConfiguration::new(f, 17).describe(), "6I2+I5*+I1");
    }

    #[test]
    fn shioda_tate_edge_cases() {
        let c = FiberConfiguration::new(vec![], 2).with_section(None);
        assert_eq!(shioda_tate_rank(&c).unwrap(), 0);
        let c = FiberConfiguration::new(vec![KodairaType::I(3)], 2).with_section(None);
        assert_eq!(shioda_tate_rank(&c).unwrap(), -2);
        assert!(!audit(&c, None).items[1].pass);
        let c = FiberConfiguration::new(vec![KodairaType::I(3)], 2);
        assert!(matches!(shioda_tate_rank(&c), Err(Error::NoSection)));
    }
}
