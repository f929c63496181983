//! Script text to [`Script`].
//!
//! Formulas are written in the prefix concrete syntax. Two textual devices
//! keep long presentations readable: macros (`define $Ant1(?m) := ...`,
//! used as `$Ant1(x1)`) and splices (`@12` inserts the formula of line 12,
//! `@12.l` / `@12.r` its left or right immediate subformula). A formula
//! written as `_` is computed from the justification where that is possible.

use super::*;
use crate::calculus::{apply_mp, derive_conclusion, expand_derived};
use crate::syntax::{forall, imp, parse_formula, parse_termoid};
use std::collections::{BTreeMap, HashMap, HashSet};

struct RawLine {
    label: Label,
    text: String,
    just: Justification,
    reconstructed: bool,
    width_anomaly: bool,
    note: Option<String>,
    source_line: usize,
}

struct Macro {
    params: Vec<String>,
    body: String,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ScriptError {
    ScriptError::Syntax { line, column, message: message.into() }
}

/// Joins indented continuation lines and drops comment lines.
fn logical_lines(text: &str) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if raw.starts_with(char::is_whitespace) {
            if let Some(last) = out.last_mut() {
                last.1.push(' ');
                last.1.push_str(trimmed);
                continue;
            }
        }
        out.push((i + 1, trimmed.to_string()));
    }
    out
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '*'
}

fn parse_label(tok: &str) -> Option<Label> {
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if let Some((a, b)) = tok.split_once('-') {
        if digits(a) && digits(b) {
            return Some(Label::Range(a.parse().ok()?, b.parse().ok()?));
        }
        return None;
    }
    let split = tok.find(|c: char| !c.is_ascii_digit()).unwrap_or(tok.len());
    let (n, suffix) = tok.split_at(split);
    if digits(n) {
        if !suffix.bytes().all(|b| b.is_ascii_lowercase()) {
            return None;
        }
        return Some(Label::Num(n.parse().ok()?, suffix.to_string()));
    }
    let mut cs = tok.chars();
    (cs.next()?.is_ascii_alphabetic() && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')).then(|| Label::Named(tok.into()))
}

fn parse_var_token(tok: &str) -> Option<Var> {
    match parse_termoid(tok).ok()? {
        Termoid::Var(v) => Some(v),
        _ => None,
    }
}

/// Splits `f(a, (b, c), d)` style argument text at top-level commas.
fn split_args(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

fn expand_macros(text: &str, macros: &BTreeMap<String, Macro>, depth: usize) -> Result<String, String> {
    if depth > 64 {
        return Err("macro expansion too deep".into());
    }
    if !text.contains('$') {
        return Ok(text.to_string());
    }
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] != '$' {
            out.push(chars[i]);
            i += 1;
            continue;
        }
        let start = i + 1;
        let mut j = start;
        while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
            j += 1;
        }
        let name: String = chars[start..j].iter().collect();
        let m = macros.get(&name).ok_or_else(|| format!("unknown macro ${name}"))?;
        let mut args = Vec::new();
        if !m.params.is_empty() {
            if chars.get(j) != Some(&'(') {
                return Err(format!("macro ${name} needs {} arguments", m.params.len()));
            }
            let mut depth_p = 0;
            let mut k = j;
            loop {
                match chars.get(k) {
                    Some('(') => depth_p += 1,
                    Some(')') => {
                        depth_p -= 1;
                        if depth_p == 0 {
                            break;
                        }
                    }
                    None => return Err(format!("unbalanced arguments to ${name}")),
                    _ => {}
                }
                k += 1;
            }
            let inner: String = chars[j + 1..k].iter().collect();
            args = split_args(&inner);
            if args.len() != m.params.len() {
                return Err(format!("macro ${name} takes {} arguments, got {}", m.params.len(), args.len()));
            }
            j = k + 1;
        }
        let mut body = String::new();
        let bc: Vec<char> = m.body.chars().collect();
        let mut p = 0;
        while p < bc.len() {
            if bc[p] == '?' {
                let s = p + 1;
                let mut e = s;
                while e < bc.len() && (bc[e].is_ascii_alphanumeric() || bc[e] == '_') {
                    e += 1;
                }
                let pname: String = bc[s..e].iter().collect();
                let idx = m.params.iter().position(|q| *q == pname).ok_or_else(|| format!("unknown parameter ?{pname}"))?;
                body.push_str(&args[idx]);
                p = e;
            } else {
                body.push(bc[p]);
                p += 1;
            }
        }
        out.push_str(&expand_macros(&body, macros, depth + 1)?);
        i = j;
    }
    Ok(out)
}

fn parse_justification(text: &str, macros: &BTreeMap<String, Macro>) -> Result<Justification, String> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    let Some(&head) = toks.first() else {
        return Err("missing justification".into());
    };
    let args = &toks[1..];
    let want = |n: usize| -> Result<(), String> {
        if args.len() == n {
            Ok(())
        } else {
            Err(format!("{head} takes {n} arguments"))
        }
    };
    let owned = |i: usize| args[i].to_string();
    Ok(match head {
        "MP" => {
            want(2)?;
            Justification::Mp(owned(0), owned(1))
        }
        "Gen" => {
            if args.len() != 2 && !(args.len() == 4 && args[2] == "after") {
                return Err("Gen takes a line, a variable and optionally `after NAME`".into());
            }
            let var = parse_var_token(args[1]).ok_or("Gen needs a variable")?;
            Justification::Gen { premise: owned(0), var, after: args.get(3).map(|s| s.to_string()) }
        }
        "Hyp" => {
            want(1)?;
            Justification::Hyp(owned(0))
        }
        "Axiom" => {
            want(1)?;
            Justification::Axiom(owned(0))
        }
        "DefRewrite" => match args {
            [a] | ["neg", a] => Justification::DefRewrite(a.to_string()),
            _ => return Err("DefRewrite takes one line".into()),
        },
        "Notation" => {
            want(1)?;
            Justification::Notation(owned(0))
        }
        "Discharge" => {
            want(2)?;
            Justification::Discharge(owned(0), owned(1))
        }
        "SBA1" => {
            let rest = text.trim_start().strip_prefix("SBA1").unwrap_or("").trim();
            if rest.is_empty() {
                Justification::Schema(SchemaId::Sba1)
            } else {
                let t = parse_termoid(&expand_macros(rest, macros, 0)?).map_err(|e| e.to_string())?;
                Justification::Sba1(t)
            }
        }
        "ElemAx" => {
            want(1)?;
            Justification::Schema(SchemaId::ElemAx(owned(0)))
        }
        "DefAx" => {
            want(1)?;
            Justification::Schema(SchemaId::DefAx(owned(0)))
        }
        "Ga" => {
            want(1)?;
            Justification::Schema(SchemaId::Gauss(args[0].parse().map_err(|_| "Ga takes an index")?))
        }
        "DR" => {
            let rule = args.first().and_then(|r| DerivedRule::from_name(r)).ok_or("unknown derived rule")?;
            Justification::Derived(rule, args[1..].iter().map(|s| s.to_string()).collect())
        }
        _ => {
            if let Some(rule) = DerivedRule::from_name(head) {
                Justification::Derived(rule, args.iter().map(|s| s.to_string()).collect())
            } else if let Some(id) = SchemaId::from_name(head) {
                want(0)?;
                Justification::Schema(id)
            } else {
                return Err(format!("unknown justification '{head}'"));
            }
        }
    })
}

enum ResolveError {
    Syntax(String),
    Underivable(String),
}

struct Resolver<'a> {
    raw: &'a [RawLine],
    decls: &'a HashMap<String, String>,
    hyps: &'a HashMap<String, String>,
    axiomdecls: &'a HashMap<String, String>,
    macros: &'a BTreeMap<String, Macro>,
    keys: HashMap<String, usize>,
    memo: HashMap<String, Formula>,
    visiting: HashSet<String>,
}

impl Resolver<'_> {
    fn parse_text(&mut self, text: &str) -> Result<Formula, ResolveError> {
        let expanded = expand_macros(text, self.macros, 0).map_err(ResolveError::Syntax)?;
        let spliced = self.splice(&expanded)?;
        parse_formula(&spliced).map_err(|e| ResolveError::Syntax(format!("{e} in `{}`", abbreviate(&spliced))))
    }

    fn splice(&mut self, text: &str) -> Result<String, ResolveError> {
        if !text.contains('@') {
            return Ok(text.to_string());
        }
        let chars: Vec<char> = text.chars().collect();
        let mut out = String::new();
        let mut i = 0;
        while i < chars.len() {
            if chars[i] != '@' {
                out.push(chars[i]);
                i += 1;
                continue;
            }
            let s = i + 1;
            let mut e = s;
            while e < chars.len() && is_name_char(chars[e]) {
                e += 1;
            }
            let name: String = chars[s..e].iter().collect();
            let mut f = self.resolve(&name).map_err(|err| match err {
                ResolveError::Underivable(m) => ResolveError::Syntax(format!("cannot splice @{name}: {m}")),
                other => other,
            })?;
            while e + 1 < chars.len() && chars[e] == '.' && (chars[e + 1] == 'l' || chars[e + 1] == 'r') {
                let left = chars[e + 1] == 'l';
                let (a, b) = match &f {
                    Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => ((**a).clone(), (**b).clone()),
                    _ => return Err(ResolveError::Syntax(format!("@{name}: projection of a formula without two parts"))),
                };
                f = if left { a } else { b };
                e += 2;
            }
            out.push_str(&f.to_string());
            i = e;
        }
        Ok(out)
    }

    fn resolve(&mut self, name: &str) -> Result<Formula, ResolveError> {
        if let Some(f) = self.memo.get(name) {
            return Ok(f.clone());
        }
        if !self.visiting.insert(name.to_string()) {
            return Err(ResolveError::Syntax(format!("cyclic reference through @{name}")));
        }
        let result = self.resolve_uncached(name);
        self.visiting.remove(name);
        let f = result?;
        self.memo.insert(name.to_string(), f.clone());
        Ok(f)
    }

    fn resolve_uncached(&mut self, name: &str) -> Result<Formula, ResolveError> {
        if let Some(text) = self.decls.get(name) {
            let text = text.clone();
            return self.parse_text(&text);
        }
        if let Some(&i) = self.keys.get(name) {
            let line = &self.raw[i];
            if line.text != "_" {
                let text = line.text.clone();
                return self.parse_text(&text);
            }
            return self.derive(i);
        }
        if let Ok(k) = name.parse::<u32>() {
            if let Some(i) = self.raw.iter().position(|l| matches!(l.label, Label::Range(s, e) if s <= k && k < e)) {
                return self.interior(i, k);
            }
        }
        Err(ResolveError::Syntax(format!("unknown reference @{name}")))
    }

    fn interior(&mut self, i: usize, k: u32) -> Result<Formula, ResolveError> {
        let Label::Range(s, _) = self.raw[i].label else { unreachable!() };
        let Justification::Derived(rule, ref cites) = self.raw[i].just else {
            return Err(ResolveError::Underivable("range without a derived rule".into()));
        };
        let cites = cites.clone();
        let key = self.raw[i].label.key();
        let concl = self.resolve(&key)?;
        let premises = cites.iter().map(|c| self.resolve(c)).collect::<Result<Vec<_>, _>>()?;
        let lines = expand_derived(rule, &premises, &concl).map_err(|e| ResolveError::Underivable(e.to_string()))?;
        let prim: Vec<_> = lines.into_iter().filter(|l| !l.is_rewrite()).collect();
        prim.get((k - s) as usize)
            .map(|l| l.formula.clone())
            .ok_or_else(|| ResolveError::Underivable(format!("line {k} lies outside the expansion")))
    }

    fn derive(&mut self, i: usize) -> Result<Formula, ResolveError> {
        let just = self.raw[i].just.clone();
        let under = |m: &str| ResolveError::Underivable(m.to_string());
        match just {
            Justification::Mp(a, b) => {
                let (fa, fb) = (self.resolve(&a)?, self.resolve(&b)?);
                apply_mp(&fa, &fb, Mode::Open)
                    .or_else(|_| apply_mp(&fb, &fa, Mode::Open))
                    .map_err(|e| ResolveError::Underivable(e.to_string()))
            }
            Justification::Gen { premise, var, .. } => Ok(forall(var, self.resolve(&premise)?)),
            Justification::Derived(rule, cites) => {
                let ps = cites.iter().map(|c| self.resolve(c)).collect::<Result<Vec<_>, _>>()?;
                derive_conclusion(rule, &ps).ok_or_else(|| under("the premises do not determine the conclusion"))
            }
            Justification::Hyp(h) => {
                let t = self.hyps.get(&h).cloned().ok_or_else(|| under("unknown hypothesis"))?;
                self.parse_text(&t)
            }
            Justification::Axiom(h) => {
                let t = self.axiomdecls.get(&h).cloned().ok_or_else(|| under("unknown axiom declaration"))?;
                self.parse_text(&t)
            }
            Justification::Discharge(h, a) => {
                let t = self.hyps.get(&h).cloned().ok_or_else(|| under("unknown hypothesis"))?;
                let hf = self.parse_text(&t)?;
                Ok(imp(hf, self.resolve(&a)?))
            }
            Justification::DefRewrite(a) | Justification::Notation(a) => self.resolve(&a),
            Justification::Schema(_) | Justification::Sba1(_) => Err(under("axiom lines need an explicit formula")),
        }
    }
}

fn abbreviate(s: &str) -> String {
    if s.chars().count() > 120 {
        format!("{}...", s.chars().take(120).collect::<String>())
    } else {
        s.to_string()
    }
}

fn split_decl(rest: &str) -> Option<(String, String)> {
    let (name, body) = rest.split_once(':')?;
    let name = name.trim();
    (!name.is_empty() && name.chars().all(is_name_char)).then(|| (name.to_string(), body.trim().to_string()))
}

/// Parses and resolves a script.
pub fn parse_script(text: &str) -> Result<Script, ScriptError> {
    let mut name = String::from("unnamed");
    let mut mode = Mode::Open;
    let mut system = System::Ari;
    let mut params = Vec::new();
    let mut hyp_order = Vec::new();
    let mut ax_order = Vec::new();
    let mut prem_order = Vec::new();
    let mut hyps = HashMap::new();
    let mut axiomdecls = HashMap::new();
    let mut decls = HashMap::new();
    let mut macros = BTreeMap::new();
    let mut deferred = Vec::new();
    let mut discharges = Vec::new();
    let mut qed = None;
    let mut raw: Vec<RawLine> = Vec::new();

    for (ln, line) in logical_lines(text) {
        let (kw, rest) = line.split_once(char::is_whitespace).map(|(a, b)| (a, b.trim())).unwrap_or((line.as_str(), ""));
        let strip = |s: &str| s.split('#').next().unwrap_or("").trim().to_string();
        match kw {
            "script" => name = strip(rest),
            "logic" => {
                mode = match strip(rest).as_str() {
                    "open" => Mode::Open,
                    "closed" => Mode::Closed,
                    other => return Err(syntax(ln, 7, format!("unknown logic '{other}'"))),
                }
            }
            "system" => {
                system = match strip(rest).as_str() {
                    "Ari" => System::Ari,
                    "Ari+" => System::AriPlus,
                    "AriNu" => System::AriNu,
                    other => return Err(syntax(ln, 8, format!("unknown system '{other}'"))),
                }
            }
            "param" => {
                for tok in strip(rest).split_whitespace() {
                    params.push(parse_var_token(tok).ok_or_else(|| syntax(ln, 7, format!("bad parameter '{tok}'")))?);
                }
            }
            "hyp" | "axiomdecl" | "premise" => {
                let (n, body) = split_decl(&strip(rest)).ok_or_else(|| syntax(ln, kw.len() + 2, "expected `NAME: formula`"))?;
                if decls.contains_key(&n) {
                    return Err(syntax(ln, kw.len() + 2, format!("duplicate declaration '{n}'")));
                }
                decls.insert(n.clone(), body.clone());
                match kw {
                    "hyp" => {
                        hyps.insert(n.clone(), body);
                        hyp_order.push(n);
                    }
                    "axiomdecl" => {
                        axiomdecls.insert(n.clone(), body);
                        ax_order.push(n);
                    }
                    _ => prem_order.push(n),
                }
            }
            "define" => {
                let (head, body) = strip(rest).split_once(":=").map(|(a, b)| (a.trim().to_string(), b.trim().to_string())).ok_or_else(|| syntax(ln, 8, "expected `$Name(?p) := text`"))?;
                let head = head.strip_prefix('$').ok_or_else(|| syntax(ln, 8, "macro names start with $"))?;
                let (mname, params) = match head.split_once('(') {
                    Some((n, ps)) => {
                        let ps = ps.strip_suffix(')').ok_or_else(|| syntax(ln, 8, "unclosed parameter list"))?;
                        let ps = split_args(ps)
                            .into_iter()
                            .map(|p| p.strip_prefix('?').map(str::to_string).ok_or_else(|| syntax(ln, 8, "parameters start with ?")))
                            .collect::<Result<Vec<_>, _>>()?;
                        (n.trim().to_string(), ps)
                    }
                    None => (head.trim().to_string(), Vec::new()),
                };
                macros.insert(mname, Macro { params, body });
            }
            "defer" => {
                let (n, body) = split_decl(rest).ok_or_else(|| syntax(ln, 7, "expected `NAME: text`"))?;
                deferred.push((n, body));
            }
            "discharge" => discharges.push(strip(rest)),
            "qed" => qed = Some(strip(rest)),
            _ => {
                let Some(dot) = line.find(". ") else {
                    return Err(syntax(ln, 1, format!("unrecognized line '{}'", abbreviate(&line))));
                };
                let label = parse_label(&line[..dot]).ok_or_else(|| syntax(ln, 1, format!("bad label '{}'", &line[..dot])))?;
                let body = &line[dot + 2..];
                let Some((ftext, jtext)) = body.split_once("::") else {
                    return Err(syntax(ln, dot + 3, "expected `formula :: justification`"));
                };
                let (jtext, annot) = match jtext.split_once('#') {
                    Some((j, a)) => (j, Some(a.trim().to_string())),
                    None => (jtext, None),
                };
                let just = parse_justification(jtext, &macros).map_err(|m| syntax(ln, dot + 3 + ftext.len() + 2, m))?;
                let annot = annot.unwrap_or_default();
                let reconstructed = annot.split(';').any(|a| a.trim() == "reconstructed");
                let width_anomaly = annot.split(';').any(|a| a.trim() == "width");
                let note = annot
                    .split(';')
                    .map(str::trim)
                    .filter(|a| !a.is_empty() && *a != "reconstructed" && *a != "width")
                    .collect::<Vec<_>>()
                    .join("; ");
                raw.push(RawLine {
                    label,
                    text: ftext.trim().to_string(),
                    just,
                    reconstructed,
                    width_anomaly,
                    note: (!note.is_empty()).then_some(note),
                    source_line: ln,
                });
            }
        }
    }

    // label order and uniqueness
    let mut keys = HashMap::new();
    let mut last: Option<(u32, String)> = None;
    for (i, l) in raw.iter().enumerate() {
        let key = l.label.key();
        if keys.insert(key.clone(), i).is_some() || decls.contains_key(&key) {
            return Err(syntax(l.source_line, 1, format!("duplicate label '{key}'")));
        }
        if let Label::Range(a, b) = l.label {
            if b <= a {
                return Err(ScriptError::Monotonicity { line: l.source_line, message: format!("empty range {a}-{b}") });
            }
            if !matches!(l.just, Justification::Derived(..)) {
                return Err(syntax(l.source_line, 1, "a range needs a derived-rule justification"));
            }
            keys.insert(l.label.to_string(), i);
        }
        if let Some((s, ss, e, es)) = l.label.order() {
            if let Some(prev) = &last {
                if (s, ss.clone()) <= *prev {
                    return Err(ScriptError::Monotonicity {
                        line: l.source_line,
                        message: format!("label {} does not follow {}{}", l.label, prev.0, prev.1),
                    });
                }
            }
            last = Some((e, es));
        }
    }
    let qed = match qed {
        Some(q) => q,
        None => raw.last().map(|l| l.label.key()).unwrap_or_default(),
    };
    if !keys.contains_key(&qed) {
        return Err(ScriptError::Monotonicity { line: 0, message: format!("no qed target '{qed}'") });
    }
    for d in &discharges {
        if !hyps.contains_key(d) {
            return Err(syntax(0, 0, format!("discharge of undeclared hypothesis '{d}'")));
        }
    }

    let mut r = Resolver {
        raw: &raw,
        decls: &decls,
        hyps: &hyps,
        axiomdecls: &axiomdecls,
        macros: &macros,
        keys,
        memo: HashMap::new(),
        visiting: HashSet::new(),
    };
    let mut decl_formula = |n: &String, ln: usize| -> Result<Decl, ScriptError> {
        match r.resolve(n) {
            Ok(f) => Ok(Decl { name: n.clone(), formula: f }),
            Err(ResolveError::Syntax(m) | ResolveError::Underivable(m)) => Err(syntax(ln, 1, format!("declaration {n}: {m}"))),
        }
    };
    let hyps_out = hyp_order.iter().map(|n| decl_formula(n, 0)).collect::<Result<Vec<_>, _>>()?;
    let ax_out = ax_order.iter().map(|n| decl_formula(n, 0)).collect::<Result<Vec<_>, _>>()?;
    let prem_out = prem_order.iter().map(|n| decl_formula(n, 0)).collect::<Result<Vec<_>, _>>()?;
    let mut lines = Vec::with_capacity(raw.len());
    for l in &raw {
        let formula = match r.resolve(&l.label.key()) {
            Ok(f) => Some(f),
            Err(ResolveError::Underivable(_)) => None,
            Err(ResolveError::Syntax(m)) => return Err(syntax(l.source_line, l.label.to_string().len() + 3, m)),
        };
        lines.push(ScriptLine {
            label: l.label.clone(),
            formula,
            derived: l.text == "_",
            just: l.just.clone(),
            reconstructed: l.reconstructed,
            width_anomaly: l.width_anomaly,
            note: l.note.clone(),
            source_line: l.source_line,
        });
    }
    Ok(Script {
        name,
        mode,
        system,
        params,
        hyps: hyps_out,
        axiomdecls: ax_out,
        premises: prem_out,
        deferred,
        lines,
        discharges,
        qed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{eq, num, var};

    const IMP0: &str = "\
script imp0
logic open
system Ari
define $A := eq(x1, x1)
1. imp($A, imp($A, $A)) :: Imp1
2. imp($A, imp(imp($A, $A), $A)) :: Imp1
3. imp(@2, imp(@1, imp($A, $A))) :: Imp2
4. _ :: MP 2 3
5. imp($A, $A) :: MP 1 4
qed 5
";

    #[test]
    fn parses_a_small_script() {
        let s = parse_script(IMP0).unwrap();
        assert_eq!(s.name, "imp0");
        assert_eq!(s.lines.len(), 5);
        assert_eq!(s.qed, "5");
        let a = eq(var(1), var(1));
        assert_eq!(s.lines[4].formula, Some(imp(a.clone(), a.clone())));
        assert_eq!(s.lines[3].formula, Some(imp(imp(a.clone(), imp(a.clone(), a.clone())), imp(a.clone(), a))));
        assert!(s.lines[3].derived);
    }

    #[test]
    fn macros_with_parameters_and_projections() {
        let text = "\
define $P(?a, ?b) := imp(eq(?a, ?b), eq(?b, ?a))
1. $P(x1, num(0)) :: Sym=
2. @1.r :: Hyp h
hyp h: eq(num(0), x1)
";
        let s = parse_script(text).unwrap();
        assert_eq!(s.lines[0].formula, Some(imp(eq(var(1), num(0)), eq(num(0), var(1)))));
        assert_eq!(s.lines[1].formula, Some(eq(num(0), var(1))));
    }

    #[test]
    fn labels_and_annotations() {
        let text = "\
premise a: imp(bot, bot)
premise b: imp(bot, bot)
1. imp(bot, bot) :: Imp3
1a. imp(bot, bot) :: DefRewrite 1 # reconstructed
2-6. _ :: chin a b
c1. _ :: MP 1 1 # flagged: bridge
    # an indented comment
qed 6
";
        let s = parse_script(text).unwrap();
        assert_eq!(s.lines[1].label, Label::Num(1, "a".into()));
        assert!(s.lines[1].reconstructed);
        assert_eq!(s.lines[2].label, Label::Range(2, 6));
        assert_eq!(s.lines[2].formula, Some(imp(crate::syntax::falsum(), crate::syntax::falsum())));
        assert_eq!(s.lines[3].note.as_deref(), Some("flagged: bridge"));
        assert_eq!(s.line_index("6"), Some(2));
        assert_eq!(s.line_index("2-6"), Some(2));
    }

    #[test]
    fn continuation_lines_join() {
        let text = "1. imp(eq(x1, x1),\n     eq(x1, x1)) :: Imp0\n";
        let s = parse_script(text).unwrap();
        assert!(s.lines[0].formula.is_some());
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(parse_script("qed 1\n"), Err(ScriptError::Monotonicity { .. })));
        let dup = "1. bot :: Hyp h\n1. bot :: Hyp h\nhyp h: bot\n";
        assert!(matches!(parse_script(dup), Err(ScriptError::Syntax { .. })));
        let order = "2. bot :: Hyp h\n1. bot :: Hyp h\nhyp h: bot\n";
        assert!(matches!(parse_script(order), Err(ScriptError::Monotonicity { .. })));
        let cyc = "1. @2 :: Imp0\n2. @1 :: Imp0\n";
        assert!(matches!(parse_script(cyc), Err(ScriptError::Syntax { .. })));
        assert!(matches!(parse_script("1. eq(x1 :: Ref\n"), Err(ScriptError::Syntax { line: 1, .. })));
        assert!(matches!(parse_script("1. bot :: Frobnicate\n"), Err(ScriptError::Syntax { .. })));
    }

    #[test]
    fn underivable_formula_is_kept_open() {
        let s = parse_script("1. bot :: Hyp h\n2. _ :: MP 1 1\nhyp h: bot\n").unwrap();
        assert_eq!(s.lines[1].formula, None);
    }
}
