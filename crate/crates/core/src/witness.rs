//! Re-verifiable text artifacts for decided questions.
//!
//! ```text
//! fincyc-witness v1
//! kind order
//! begin automorphism phi
//! a -> b
//! b -> a
//! end
//! order 2
//! f0 1
//! ```
//!
//! Automorphisms use their own text format between `begin … end` lines,
//! finite quotients list their row-major table.

use crate::automorphism::{fingerprint, is_out_conjugator, FingerprintConfig, FreeAutomorphism, OuterOrderCertificate};
use crate::budget::Budget;
use crate::congruence::{CongruenceWitness, FiniteQuotient, SeparationEntry, SeparationOutcome, TorusAutomorphism};
use crate::error::{Error, Result};
use crate::finite_group::FiniteGroupTable;
use crate::mapping_torus::{MappingTorus, NotConjugate, TorusElement};
use crate::whitehead::{orbit_equivalent, verify_orbit_witness, OrbitVerdict, TupleClass};
use crate::words::{Alphabet, Word};

pub const HEADER: &str = "fincyc-witness v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Order {
        phi: FreeAutomorphism,
        certificate: OuterOrderCertificate,
    },
    Center {
        phi: FreeAutomorphism,
        center: TorusElement,
    },
    TorusConjugate {
        phi: FreeAutomorphism,
        x: TorusElement,
        y: TorusElement,
        conjugator: TorusElement,
    },
    TorusNotConjugate {
        phi: FreeAutomorphism,
        x: TorusElement,
        y: TorusElement,
        certificate: NotConjugate,
    },
    OutConjugate {
        phi: FreeAutomorphism,
        psi: FreeAutomorphism,
        theta: FreeAutomorphism,
    },
    OutDistinguished {
        phi: FreeAutomorphism,
        psi: FreeAutomorphism,
        field: String,
    },
    WhiteheadEquivalent {
        t1: TupleClass,
        t2: TupleClass,
        alpha: FreeAutomorphism,
    },
    WhiteheadInequivalent {
        t1: TupleClass,
        t2: TupleClass,
    },
    Congruence(CongruenceWitness),
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Order { .. } => "order",
            Witness::Center { .. } => "center",
            Witness::TorusConjugate { .. } | Witness::TorusNotConjugate { .. } => "torus-conj",
            Witness::OutConjugate { .. } | Witness::OutDistinguished { .. } => "out-conj",
            Witness::WhiteheadEquivalent { .. } | Witness::WhiteheadInequivalent { .. } => "whitehead",
            Witness::Congruence(_) => "congruence",
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{HEADER}\nkind {}\n", self.kind());
        match self {
            Witness::Order { phi, certificate } => {
                auto_block(&mut out, "phi", phi);
                out.push_str(&format!("order {}\nf0 {}\n", certificate.order, certificate.f0));
            }
            Witness::Center { phi, center } => {
                auto_block(&mut out, "phi", phi);
                out.push_str(&format!("center {center}\n"));
            }
            Witness::TorusConjugate { phi, x, y, conjugator } => {
                auto_block(&mut out, "phi", phi);
                out.push_str(&format!("x {x}\ny {y}\nverdict conjugate\nconjugator {conjugator}\n"));
            }
            Witness::TorusNotConjugate { phi, x, y, certificate } => {
                auto_block(&mut out, "phi", phi);
                out.push_str(&format!("x {x}\ny {y}\nverdict not-conjugate\n"));
                match certificate {
                    NotConjugate::Exponent { .. } => out.push_str("reason exponent\n"),
                    NotConjugate::FreeConjugacy => out.push_str("reason free-conjugacy\n"),
                    NotConjugate::Power { n } => out.push_str(&format!("reason power {n}\n")),
                    NotConjugate::Quotient(q) => {
                        out.push_str("reason quotient\n");
                        quotient_block(&mut out, q);
                    }
                }
            }
            Witness::OutConjugate { phi, psi, theta } => {
                auto_block(&mut out, "phi", phi);
                auto_block(&mut out, "psi", psi);
                out.push_str("verdict conjugate\n");
                auto_block(&mut out, "theta", theta);
            }
            Witness::OutDistinguished { phi, psi, field } => {
                auto_block(&mut out, "phi", phi);
                auto_block(&mut out, "psi", psi);
                out.push_str(&format!("verdict distinguished\nfield {field}\n"));
            }
            Witness::WhiteheadEquivalent { t1, t2, alpha } => {
                out.push_str(&format!("rank {}\nt1 {t1}\nt2 {t2}\nverdict equivalent\n", t1.alphabet().rank()));
                auto_block(&mut out, "alpha", alpha);
            }
            Witness::WhiteheadInequivalent { t1, t2 } => {
                out.push_str(&format!("rank {}\nt1 {t1}\nt2 {t2}\nverdict inequivalent\n", t1.alphabet().rank()));
            }
            Witness::Congruence(w) => {
                auto_block(&mut out, "phi", w.torus.monodromy());
                match &w.quotient {
                    Some(q) => quotient_block(&mut out, q),
                    None => out.push_str("quotient none\n"),
                }
                for e in &w.entries {
                    out.push_str(&format!("entry {}\n", e.id));
                    out.push_str("begin torus-automorphism\n");
                    out.push_str(&e.automorphism.to_text());
                    out.push_str("end\n");
                    let line = match &e.outcome {
                        SeparationOutcome::Separated { images } => format!("separated {}", join(images)),
                        SeparationOutcome::Trivial { conjugator } => format!("trivial {conjugator}"),
                        SeparationOutcome::NotApplicable { bound } => format!("not-applicable {bound}"),
                        SeparationOutcome::Unseparated { reasons } => format!("unseparated {}", reasons.len()),
                    };
                    out.push_str(&format!("outcome {line}\n"));
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut r = Reader::new(text);
        let header = r.line()?;
        if header.1 != HEADER {
            return Err(Error::parse(header.0, 1, format!("expected `{HEADER}`")));
        }
        let kind = r.value("kind")?;
        let w = match kind.as_str() {
            "order" => {
                let phi = r.automorphism("phi")?;
                let order = r.number("order")?;
                let f0 = r.word("f0", phi.alphabet())?;
                Witness::Order {
                    phi,
                    certificate: OuterOrderCertificate { order, f0 },
                }
            }
            "center" => {
                let phi = r.automorphism("phi")?;
                let center = r.element("center", phi.alphabet())?;
                Witness::Center { phi, center }
            }
            "torus-conj" => {
                let phi = r.automorphism("phi")?;
                let x = r.element("x", phi.alphabet())?;
                let y = r.element("y", phi.alphabet())?;
                match r.value("verdict")?.as_str() {
                    "conjugate" => {
                        let conjugator = r.element("conjugator", phi.alphabet())?;
                        Witness::TorusConjugate { phi, x, y, conjugator }
                    }
                    "not-conjugate" => {
                        let reason = r.value("reason")?;
                        let certificate = match reason.split_whitespace().collect::<Vec<_>>()[..] {
                            ["exponent"] => NotConjugate::Exponent {
                                left: x.t_exp,
                                right: y.t_exp,
                            },
                            ["free-conjugacy"] => NotConjugate::FreeConjugacy,
                            ["power", n] => NotConjugate::Power {
                                n: n.parse().map_err(|_| r.error("bad power"))?,
                            },
                            ["quotient"] => NotConjugate::Quotient(Box::new(r.quotient()?)),
                            _ => return Err(r.error("unknown reason")),
                        };
                        Witness::TorusNotConjugate { phi, x, y, certificate }
                    }
                    _ => return Err(r.error("unknown verdict")),
                }
            }
            "out-conj" => {
                let phi = r.automorphism("phi")?;
                let psi = r.automorphism("psi")?;
                match r.value("verdict")?.as_str() {
                    "conjugate" => Witness::OutConjugate {
                        phi,
                        psi,
                        theta: r.automorphism("theta")?,
                    },
                    "distinguished" => Witness::OutDistinguished {
                        phi,
                        psi,
                        field: r.value("field")?,
                    },
                    _ => return Err(r.error("unknown verdict")),
                }
            }
            "whitehead" => {
                let rank: u32 = r.number("rank")?;
                let alphabet = Alphabet::new(rank)?;
                let t1 = TupleClass::parse(&r.value("t1")?, alphabet)?;
                let t2 = TupleClass::parse(&r.value("t2")?, alphabet)?;
                match r.value("verdict")?.as_str() {
                    "equivalent" => Witness::WhiteheadEquivalent {
                        t1,
                        t2,
                        alpha: r.automorphism("alpha")?,
                    },
                    "inequivalent" => Witness::WhiteheadInequivalent { t1, t2 },
                    _ => return Err(r.error("unknown verdict")),
                }
            }
            "congruence" => {
                let phi = r.automorphism("phi")?;
                let torus = MappingTorus::new(phi)?;
                let quotient = if r.peek() == Some("quotient none") {
                    r.line()?;
                    None
                } else {
                    Some(r.quotient()?)
                };
                let mut entries = Vec::new();
                while r.peek().is_some() {
                    let id = r.value("entry")?;
                    let automorphism = TorusAutomorphism::parse_text(&r.block("torus-automorphism")?, &torus)?;
                    let outcome = r.value("outcome")?;
                    let (tag, rest) = outcome.split_once(' ').unwrap_or((outcome.as_str(), ""));
                    let outcome = match tag {
                        "separated" => SeparationOutcome::Separated {
                            images: parse_numbers(rest).ok_or_else(|| r.error("bad images"))?,
                        },
                        "trivial" => SeparationOutcome::Trivial {
                            conjugator: TorusElement::parse(rest, torus.alphabet())?,
                        },
                        "not-applicable" => SeparationOutcome::NotApplicable {
                            bound: rest.parse().map_err(|_| r.error("bad bound"))?,
                        },
                        "unseparated" => SeparationOutcome::Unseparated { reasons: Vec::new() },
                        _ => return Err(r.error("unknown outcome")),
                    };
                    entries.push(SeparationEntry {
                        id,
                        automorphism,
                        outcome,
                    });
                }
                Witness::Congruence(CongruenceWitness {
                    torus,
                    quotient,
                    entries,
                })
            }
            _ => return Err(r.error("unknown kind")),
        };
        if r.peek().is_some() {
            return Err(r.error("trailing content"));
        }
        Ok(w)
    }

    /// Re-checks every claim in the witness from scratch.
    pub fn verify(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Falsified(msg.to_string()));
        match self {
            Witness::Order { phi, certificate } => certificate.verify(phi),
            Witness::Center { phi, center } => {
                let t = MappingTorus::new(phi.clone())?;
                if t.center()? != *center {
                    return fail("center differs from t^k f0");
                }
                Ok(())
            }
            Witness::TorusConjugate { phi, x, y, conjugator } => {
                let t = MappingTorus::new(phi.clone())?;
                if t.conjugate(x, conjugator) != *y {
                    return fail("conjugator does not carry x to y");
                }
                Ok(())
            }
            Witness::TorusNotConjugate { phi, x, y, certificate } => {
                let t = MappingTorus::new(phi.clone())?;
                if !certificate.verify(x, y, &t) {
                    return fail("non-conjugacy certificate does not check");
                }
                Ok(())
            }
            Witness::OutConjugate { phi, psi, theta } => {
                if !is_out_conjugator(phi, psi, theta) {
                    return fail("theta does not conjugate the outer classes");
                }
                Ok(())
            }
            Witness::OutDistinguished { phi, psi, field } => {
                let config = FingerprintConfig::default();
                let found = fingerprint(phi, &config).distinguishing_field(&fingerprint(psi, &config));
                if found.as_deref() != Some(field.as_str()) {
                    return fail("fingerprints do not differ as claimed");
                }
                Ok(())
            }
            Witness::WhiteheadEquivalent { t1, t2, alpha } => {
                if !verify_orbit_witness(t1, t2, alpha) {
                    return fail("alpha does not carry t1 to t2");
                }
                Ok(())
            }
            Witness::WhiteheadInequivalent { t1, t2 } => match orbit_equivalent(t1, t2, Budget::default())? {
                OrbitVerdict::Inequivalent => Ok(()),
                _ => fail("tuples are not shown inequivalent"),
            },
            Witness::Congruence(w) => {
                w.verify()?;
                for e in &w.entries {
                    if let SeparationOutcome::NotApplicable { bound } = e.outcome {
                        if e.automorphism.outer_order(bound).is_some() {
                            return fail("automorphism has finite outer order within the bound");
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

fn join(xs: &[u32]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn parse_numbers(s: &str) -> Option<Vec<u32>> {
    s.split_whitespace().map(|x| x.parse().ok()).collect()
}

fn auto_block(out: &mut String, name: &str, phi: &FreeAutomorphism) {
    out.push_str(&format!("begin automorphism {name}\n"));
    out.push_str(&phi.to_text());
    out.push_str("end\n");
}

fn quotient_block(out: &mut String, q: &FiniteQuotient) {
    let t = q.target();
    out.push_str("begin quotient\n");
    out.push_str(&format!("label {}\norder {}\nidentity {}\n", q.label(), t.order(), t.identity()));
    out.push_str(&format!("images {}\n", join(q.generator_images())));
    match q.t_image() {
        Some(x) => out.push_str(&format!("t-image {x}\n")),
        None => out.push_str("t-image none\n"),
    }
    for row in t.product_table().chunks(t.order()) {
        out.push_str(&format!("row {}\n", join(row)));
    }
    out.push_str("end\n");
}

struct Reader<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Reader { lines, pos: 0 }
    }

    fn error(&self, msg: &str) -> Error {
        let line = self.lines.get(self.pos.saturating_sub(1)).map_or(1, |l| l.0);
        Error::parse(line, 1, msg.to_string())
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).map(|l| l.1)
    }

    fn line(&mut self) -> Result<(usize, &'a str)> {
        let l = *self
            .lines
            .get(self.pos)
            .ok_or_else(|| Error::parse(self.lines.last().map_or(1, |l| l.0 + 1), 1, "unexpected end of witness"))?;
        self.pos += 1;
        Ok(l)
    }

    fn value(&mut self, key: &str) -> Result<String> {
        let (n, l) = self.line()?;
        l.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix(' '))
            .map(str::to_string)
            .ok_or_else(|| Error::parse(n, 1, format!("expected `{key} …`")))
    }

    fn number<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let v = self.value(key)?;
        v.trim().parse().map_err(|_| self.error(&format!("bad number for `{key}`")))
    }

    fn word(&mut self, key: &str, alphabet: Alphabet) -> Result<Word> {
        let (n, _) = self.lines[self.pos.min(self.lines.len().saturating_sub(1))];
        let v = self.value(key)?;
        Word::parse(v.trim(), alphabet).map_err(|e| e.at_line(n, key.len() + 1))
    }

    fn element(&mut self, key: &str, alphabet: Alphabet) -> Result<TorusElement> {
        let (n, _) = self.lines[self.pos.min(self.lines.len().saturating_sub(1))];
        let v = self.value(key)?;
        TorusElement::parse(&v, alphabet).map_err(|e| e.at_line(n, key.len() + 1))
    }

    /// Lines between `begin <name>` and `end`, joined.
    fn block(&mut self, name: &str) -> Result<String> {
        let (n, l) = self.line()?;
        if l != format!("begin {name}") {
            return Err(Error::parse(n, 1, format!("expected `begin {name}`")));
        }
        let mut body = String::new();
        loop {
            let (_, l) = self.line()?;
            if l == "end" {
                return Ok(body);
            }
            body.push_str(l);
            body.push('\n');
        }
    }

    fn automorphism(&mut self, name: &str) -> Result<FreeAutomorphism> {
        let start = self.lines.get(self.pos).map_or(1, |l| l.0);
        FreeAutomorphism::parse_text(&self.block(&format!("automorphism {name}"))?).map_err(|e| match e {
            Error::Parse { line, column, message } => Error::parse(start + line, column, message),
            other => other,
        })
    }

    fn quotient(&mut self) -> Result<FiniteQuotient> {
        let (n, l) = self.line()?;
        if l != "begin quotient" {
            return Err(Error::parse(n, 1, "expected `begin quotient`"));
        }
        let label = self.value("label")?;
        let order: usize = self.number("order")?;
        let identity: u32 = self.number("identity")?;
        let images = parse_numbers(&self.value("images")?).ok_or_else(|| self.error("bad images"))?;
        let t = self.value("t-image")?;
        let t_image = if t == "none" {
            None
        } else {
            Some(t.parse().map_err(|_| self.error("bad t-image"))?)
        };
        let mut product = Vec::with_capacity(order * order);
        for _ in 0..order {
            let row = parse_numbers(&self.value("row")?).ok_or_else(|| self.error("bad row"))?;
            if row.len() != order {
                return Err(self.error("row length differs from the order"));
            }
            product.extend(row);
        }
        let (n, l) = self.line()?;
        if l != "end" {
            return Err(Error::parse(n, 1, "expected `end`"));
        }
        if images.iter().chain(t_image.iter()).any(|&x| x as usize >= order) {
            return Err(self.error("image out of range"));
        }
        let table = FiniteGroupTable::from_product(order, product, identity)?;
        Ok(FiniteQuotient::new(table, images, t_image, label))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::outer_order;
    use crate::congruence::z_rtimes_z_congruence;
    use crate::mapping_torus::{torus_conjugate, TorusConjugacy};

    fn swap() -> FreeAutomorphism {
        FreeAutomorphism::parse_images(&["b", "a"], Alphabet::new(2).unwrap()).unwrap()
    }

    fn round_trip(w: &Witness) {
        let text = w.to_text();
        let back = Witness::parse(&text).unwrap();
        assert_eq!(back.to_text(), text);
        back.verify().unwrap();
    }

    #[test]
    fn order_witness_text() {
        let phi = swap();
        let w = Witness::Order {
            certificate: outer_order(&phi, 8).certificate().unwrap().clone(),
            phi,
        };
        assert_eq!(
            w.to_text(),
            "fincyc-witness v1\nkind order\nbegin automorphism phi\na -> b\nb -> a\nend\norder 2\nf0 1\n"
        );
        round_trip(&w);
    }

    #[test]
    fn torus_witnesses() {
        let t = MappingTorus::new(swap()).unwrap();
        let el = |s: &str| t.parse_element(s).unwrap();
        for (x, y) in [("a", "b"), ("a", "A"), ("t^1", "t^1 a"), ("t^1", "t^2"), ("t^1 ab", "t^1 bA")] {
            let (x, y) = (el(x), el(y));
            let w = match torus_conjugate(&x, &y, &t, Budget::default()) {
                TorusConjugacy::Conjugate(c) => Witness::TorusConjugate {
                    phi: swap(),
                    x,
                    y,
                    conjugator: c,
                },
                TorusConjugacy::NotConjugate(c) => Witness::TorusNotConjugate {
                    phi: swap(),
                    x,
                    y,
                    certificate: c,
                },
                TorusConjugacy::Unresolved => panic!("unresolved"),
            };
            round_trip(&w);
        }
    }

    #[test]
    fn congruence_witness() {
        round_trip(&Witness::Congruence(z_rtimes_z_congruence()));
    }

    #[test]
    fn tampering_is_detected() {
        let phi = swap();
        let w = Witness::Center {
            phi,
            center: TorusElement::new(2, Alphabet::new(2).unwrap().identity()),
        };
        round_trip(&w);
        let bad = w.to_text().replace("center t^2 1", "center t^4 1");
        assert!(Witness::parse(&bad).unwrap().verify().is_err());
        assert!(Witness::parse("fincyc-witness v2\n").is_err());
    }
}
