use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Self {
        Formula::Atom(name.to_string())
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    /// `φ → ⊥`
    pub fn not(a: Formula) -> Self {
        Formula::imp(a, Formula::Bot)
    }

    /// `⊥ → ⊥`
    pub fn top() -> Self {
        Formula::imp(Formula::Bot, Formula::Bot)
    }

    /// Atom names, sorted.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out.into_iter().collect()
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Every subformula, each once, children before parents.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out: Vec<&Formula> = Vec::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        if let Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) = self {
            a.collect_subformulas(out);
            b.collect_subformulas(out);
        }
        if !out.contains(&self) {
            out.push(self);
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Imp(_, b) if **b == Formula::Bot => 4,
            Formula::Imp(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Atom(_) | Formula::Bot => 5,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.precedence();
        if p < min {
            write!(f, "(")?;
        }
        match self {
            Formula::Atom(a) => write!(f, "{a}")?,
            Formula::Bot => write!(f, "_|_")?,
            Formula::Imp(a, _) if p == 4 => {
                write!(f, "~")?;
                a.fmt_at(f, 4)?;
            }
            Formula::And(a, b) => {
                a.fmt_at(f, 3)?;
                write!(f, " & ")?;
                b.fmt_at(f, 4)?;
            }
            Formula::Or(a, b) => {
                a.fmt_at(f, 2)?;
                write!(f, " | ")?;
                b.fmt_at(f, 3)?;
            }
            Formula::Imp(a, b) => {
                a.fmt_at(f, 2)?;
                write!(f, " -> ")?;
                b.fmt_at(f, 1)?;
            }
        }
        if p < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Minimal parentheses; reparses to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}
