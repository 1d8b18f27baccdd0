//! Lowering of surface PEG expressions to core GTDPL rules.
//!
//! | surface           | core                              |
//! |-------------------|-----------------------------------|
//! | `e1 e2`           | `A <- B[C,F]`                     |
//! | `e1* e2`          | `A <- B[A,C]` (star fused in seq) |
//! | `e1 / e2`         | `A <- B[E,C]`                     |
//! | `e1*`             | `A <- B[A,E]`                     |
//! | `!e1`             | `A <- B[F,E]`                     |
//! | `e+`              | `e e*`                            |
//! | `e?`              | `e / eps`                         |
//! | `"abc"`           | `'a' ("bc")`                      |
//! | `[...]`           | balanced choice over its bytes    |
//!
//! Atoms (`eps`, `fail`, terminals, classes, literals) are lowered once per
//! program and shared by every occurrence; compound expressions get a rule
//! per occurrence. Fresh rule names start with `$`, which user grammars
//! cannot spell.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::surface::{ByteRange, QuotedByte, SurfaceExpr, SurfaceGrammar};
use super::{GExpr, Program, RuleId};

/// Lowers a well-formed surface grammar to a core program.
///
/// User rules keep their textual order, so they occupy ids `0..n` and the
/// first rule is the start symbol. Helper rules follow.
pub fn desugar(g: &SurfaceGrammar) -> Program {
    let mut d = Lowering::default();
    for (name, _) in &g.rules {
        let id = d.alloc(name.clone());
        d.ids.insert(name.clone(), id);
    }
    // user rules whose body is an atom double as the shared rule for it
    for (i, (_, body)) in g.rules.iter().enumerate() {
        let key = normalize(body);
        if is_atom(&key) {
            d.memo.entry(key).or_insert(RuleId::from(i));
        }
    }
    for (i, (_, body)) in g.rules.iter().enumerate() {
        let id = RuleId::from(i);
        let g = d.body(&normalize(body), id);
        d.rules[i] = Some(g);
    }
    let rules = d.rules.into_iter().map(|g| g.expect("every allocated rule is defined")).collect();
    Program::new(rules, d.names, RuleId(0)).expect("lowering only references allocated rules")
}

#[derive(Default)]
struct Lowering {
    rules: Vec<Option<GExpr>>,
    names: Vec<String>,
    ids: BTreeMap<String, RuleId>,
    memo: BTreeMap<SurfaceExpr, RuleId>,
    fresh: usize,
}

impl Lowering {
    fn alloc(&mut self, name: String) -> RuleId {
        let id = RuleId::from(self.rules.len());
        self.rules.push(None);
        self.names.push(name);
        id
    }

    fn eps(&mut self) -> RuleId {
        self.lower(&SurfaceExpr::Empty)
    }

    fn fail(&mut self) -> RuleId {
        self.lower(&SurfaceExpr::Fail)
    }

    fn lower(&mut self, e: &SurfaceExpr) -> RuleId {
        if let SurfaceExpr::Nonterminal(n) = e {
            return self.ids[n];
        }
        let key = normalize(e);
        let atom = is_atom(&key);
        if let Some(&id) = self.memo.get(&key).filter(|_| atom) {
            return id;
        }
        let name = match &key {
            SurfaceExpr::Empty => String::from("$E"),
            SurfaceExpr::Fail => String::from("$F"),
            SurfaceExpr::Terminal(b) => format!("${}", QuotedByte(*b)),
            _ => {
                self.fresh += 1;
                format!("${}", self.fresh)
            }
        };
        let id = self.alloc(name);
        if atom {
            self.memo.insert(key.clone(), id);
        }
        let g = self.body(&key, id);
        self.rules[id.index()] = Some(g);
        id
    }

    fn ternary(&mut self, cond: RuleId, cont: RuleId, alt: RuleId) -> GExpr {
        GExpr::Ternary { cond, cont, alt }
    }

    /// Core expression for `e` when it is the body of rule `this`.
    fn body(&mut self, e: &SurfaceExpr, this: RuleId) -> GExpr {
        match e {
            SurfaceExpr::Empty => GExpr::Eps,
            SurfaceExpr::Fail => GExpr::Fail,
            SurfaceExpr::Terminal(b) => GExpr::Term(*b),
            SurfaceExpr::ByteClass(ranges) => {
                let bytes: Vec<u8> = ranges.iter().flat_map(|r| r.lo..=r.hi).collect();
                let (left, right) = bytes.split_at(bytes.len() / 2);
                let l = self.lower(&class_of(left));
                let e = self.eps();
                let r = self.lower(&class_of(right));
                self.ternary(l, e, r)
            }
            SurfaceExpr::Literal(bytes) => {
                let head = self.lower(&SurfaceExpr::Terminal(bytes[0]));
                let tail = self.lower(&SurfaceExpr::Literal(bytes[1..].to_vec()));
                let f = self.fail();
                self.ternary(head, tail, f)
            }
            SurfaceExpr::Nonterminal(n) => {
                let target = self.ids[n];
                let e = self.eps();
                let f = self.fail();
                self.ternary(target, e, f)
            }
            SurfaceExpr::Seq(a, b) => {
                if let SurfaceExpr::Star(inner) = &**a {
                    let body = self.lower(inner);
                    let rest = self.lower(b);
                    self.ternary(body, this, rest)
                } else {
                    let first = self.lower(a);
                    let rest = self.lower(b);
                    let f = self.fail();
                    self.ternary(first, rest, f)
                }
            }
            SurfaceExpr::Choice(a, b) => {
                let first = self.lower(a);
                let e = self.eps();
                let rest = self.lower(b);
                self.ternary(first, e, rest)
            }
            SurfaceExpr::Star(a) => {
                let body = self.lower(a);
                let e = self.eps();
                self.ternary(body, this, e)
            }
            SurfaceExpr::Plus(a) => {
                let first = self.lower(a);
                let rest = self.lower(&SurfaceExpr::Star(a.clone()));
                let f = self.fail();
                self.ternary(first, rest, f)
            }
            SurfaceExpr::Opt(a) => {
                let first = self.lower(a);
                let e = self.eps();
                self.ternary(first, e, e)
            }
            SurfaceExpr::Not(a) => {
                let inner = self.lower(a);
                let f = self.fail();
                let e = self.eps();
                self.ternary(inner, f, e)
            }
            SurfaceExpr::Ternary(x, y, z) => {
                let (x, y, z) = (self.ids[x], self.ids[y], self.ids[z]);
                self.ternary(x, y, z)
            }
        }
    }
}

fn is_atom(e: &SurfaceExpr) -> bool {
    matches!(
        e,
        SurfaceExpr::Empty
            | SurfaceExpr::Fail
            | SurfaceExpr::Terminal(_)
            | SurfaceExpr::ByteClass(_)
            | SurfaceExpr::Literal(_)
    )
}

/// Single-byte classes and literals are terminals.
fn normalize(e: &SurfaceExpr) -> SurfaceExpr {
    match e {
        SurfaceExpr::ByteClass(rs) if rs.len() == 1 && rs[0].lo == rs[0].hi => SurfaceExpr::Terminal(rs[0].lo),
        SurfaceExpr::Literal(bs) if bs.len() == 1 => SurfaceExpr::Terminal(bs[0]),
        _ => e.clone(),
    }
}

fn class_of(bytes: &[u8]) -> SurfaceExpr {
    let ranges = bytes.iter().map(|&b| ByteRange { lo: b, hi: b });
    normalize(&SurfaceExpr::class(ranges).expect("class halves are non-empty"))
}
