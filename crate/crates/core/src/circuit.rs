//! Arithmetic circuits over commuting variables: construction, degree
//! analysis, isolation multipliers and evaluation over a group algebra.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2m::{FieldContext, FieldElement};
use crate::group_algebra::{CoefficientRing, GaElement, GroupAlgebra};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VarId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GateId(pub usize);

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Gate {
    Input(VarId),
    Add(Vec<GateId>),
    Mul(GateId, GateId),
}

/// Append-only DAG; every child id is smaller than its parent's.
#[derive(Clone, Default, Debug, PartialEq, Eq)]
pub struct Circuit {
    gates: Vec<Gate>,
    output: Option<GateId>,
    var_names: Vec<String>,
    var_index: HashMap<String, VarId>,
    input_gates: HashMap<VarId, GateId>,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a variable, returning the existing id if the name is known.
    pub fn add_var(&mut self, name: impl Into<String>) -> VarId {
        let name = name.into();
        if let Some(&id) = self.var_index.get(&name) {
            return id;
        }
        let id = VarId(self.var_names.len());
        self.var_index.insert(name.clone(), id);
        self.var_names.push(name);
        id
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.var_index.get(name).copied()
    }

    pub fn var_name(&self, var: VarId) -> &str {
        &self.var_names[var.0]
    }

    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn output(&self) -> Option<GateId> {
        self.output
    }

    pub fn set_output(&mut self, gate: GateId) -> Result<()> {
        self.check_child(gate)?;
        self.output = Some(gate);
        Ok(())
    }

    fn check_child(&self, gate: GateId) -> Result<()> {
        if gate.0 >= self.gates.len() {
            Err(Error::UnknownGate(gate.0))
        } else {
            Ok(())
        }
    }

    fn push(&mut self, gate: Gate) -> GateId {
        self.gates.push(gate);
        GateId(self.gates.len() - 1)
    }

    /// Input gate for `var`; repeated calls return the same gate.
    pub fn new_input(&mut self, var: VarId) -> Result<GateId> {
        if var.0 >= self.var_names.len() {
            return Err(Error::UnassignedVariable(format!("#{}", var.0)));
        }
        if let Some(&g) = self.input_gates.get(&var) {
            return Ok(g);
        }
        let g = self.push(Gate::Input(var));
        self.input_gates.insert(var, g);
        Ok(g)
    }

    pub fn new_add(&mut self, children: Vec<GateId>) -> Result<GateId> {
        if children.is_empty() {
            return Err(Error::EmptyAdd);
        }
        for &c in &children {
            self.check_child(c)?;
        }
        Ok(self.push(Gate::Add(children)))
    }

    pub fn new_mul(&mut self, left: GateId, right: GateId) -> Result<GateId> {
        self.check_child(left)?;
        self.check_child(right)?;
        Ok(self.push(Gate::Mul(left, right)))
    }

    /// Per-gate `(min, max)` total degree of the polynomial the gate computes.
    pub fn degree_ranges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let range = match gate {
                Gate::Input(_) => (1, 1),
                Gate::Add(children) => children.iter().fold((usize::MAX, 0), |(lo, hi), c| {
                    let (clo, chi) = out[c.0];
                    (lo.min(clo), hi.max(chi))
                }),
                Gate::Mul(l, r) => (out[l.0].0 + out[r.0].0, out[l.0].1 + out[r.0].1),
            };
            out.push(range);
        }
        out
    }

    /// True iff the output is homogeneous of degree exactly `k`.
    pub fn degree_check(&self, k: usize) -> bool {
        self.output_degree() == Some((k, k))
    }

    pub fn output_degree(&self) -> Option<(usize, usize)> {
        let out = self.output?;
        Some(self.degree_ranges()[out.0])
    }

    /// Variables reachable from the output.
    pub fn used_vars(&self) -> Vec<VarId> {
        let mut vars: Vec<VarId> = self
            .live_gates()
            .iter()
            .enumerate()
            .filter(|(_, &live)| live)
            .filter_map(|(i, _)| match self.gates[i] {
                Gate::Input(v) => Some(v),
                _ => None,
            })
            .collect();
        vars.sort();
        vars
    }

    fn live_gates(&self) -> Vec<bool> {
        let mut live = vec![false; self.gates.len()];
        if let Some(out) = self.output {
            live[out.0] = true;
        }
        for i in (0..self.gates.len()).rev() {
            if !live[i] {
                continue;
            }
            match &self.gates[i] {
                Gate::Input(_) => {}
                Gate::Add(children) => children.iter().for_each(|c| live[c.0] = true),
                Gate::Mul(l, r) => {
                    live[l.0] = true;
                    live[r.0] = true;
                }
            }
        }
        live
    }

    /// Samples one uniform multiplier per addition-input edge.
    pub fn extend<G: Rng + ?Sized>(&self, field: &FieldContext, rng: &mut G) -> EdgeMultipliers {
        let mut offsets = Vec::with_capacity(self.gates.len() + 1);
        let mut values = Vec::new();
        for gate in &self.gates {
            offsets.push(values.len());
            if let Gate::Add(children) = gate {
                values.extend(children.iter().map(|_| field.random(rng)));
            }
        }
        offsets.push(values.len());
        EdgeMultipliers { offsets, values }
    }

    /// Evaluates the circuit with each addition input scaled by its edge
    /// multiplier. `values[var]` supplies the value of each input variable.
    pub fn evaluate<R: CoefficientRing>(
        &self,
        multipliers: &EdgeMultipliers,
        algebra: &GroupAlgebra<R>,
        values: &[Option<GaElement<R::Elem>>],
    ) -> Result<GaElement<R::Elem>> {
        let output = self.output.ok_or(Error::NoOutput)?;
        if multipliers.offsets.len() != self.gates.len() + 1 {
            return Err(Error::InvalidArgument(
                "edge multipliers were sampled for a different circuit".into(),
            ));
        }
        let live = self.live_gates();
        let mut uses = vec![0usize; self.gates.len()];
        for (i, gate) in self.gates.iter().enumerate() {
            if !live[i] {
                continue;
            }
            match gate {
                Gate::Input(_) => {}
                Gate::Add(children) => children.iter().for_each(|c| uses[c.0] += 1),
                Gate::Mul(l, r) => {
                    uses[l.0] += 1;
                    uses[r.0] += 1;
                }
            }
        }
        uses[output.0] += 1;

        let mut slots: Vec<Option<GaElement<R::Elem>>> = vec![None; self.gates.len()];
        for i in 0..=output.0 {
            if !live[i] {
                continue;
            }
            let value = match &self.gates[i] {
                Gate::Input(v) => values
                    .get(v.0)
                    .and_then(|x| x.as_ref())
                    .ok_or_else(|| Error::UnassignedVariable(self.var_names[v.0].clone()))?
                    .clone(),
                Gate::Add(children) => {
                    let mut acc = algebra.zero();
                    for (pos, c) in children.iter().enumerate() {
                        let child = slots[c.0].as_ref().expect("child evaluated");
                        algebra.add_scaled_assign(&mut acc, child, multipliers.get(GateId(i), pos))?;
                    }
                    acc
                }
                Gate::Mul(l, r) => {
                    let a = slots[l.0].as_ref().expect("child evaluated");
                    let b = slots[r.0].as_ref().expect("child evaluated");
                    algebra.mul(a, b)?
                }
            };
            match &self.gates[i] {
                Gate::Input(_) => {}
                Gate::Add(children) => {
                    for c in children {
                        release(&mut slots, &mut uses, *c);
                    }
                }
                Gate::Mul(l, r) => {
                    release(&mut slots, &mut uses, *l);
                    release(&mut slots, &mut uses, *r);
                }
            }
            slots[i] = Some(value);
        }
        Ok(slots[output.0].take().expect("output evaluated"))
    }

    /// S-expression text for the output gate. Shared subcircuits are printed
    /// once per use.
    pub fn to_sexpr(&self) -> Result<String> {
        let output = self.output.ok_or(Error::NoOutput)?;
        let mut out = String::new();
        self.write_sexpr(output, &mut out);
        Ok(out)
    }

    fn write_sexpr(&self, gate: GateId, out: &mut String) {
        match &self.gates[gate.0] {
            Gate::Input(v) => out.push_str(&self.var_names[v.0]),
            Gate::Add(children) => {
                out.push_str("(+");
                for c in children {
                    out.push(' ');
                    self.write_sexpr(*c, out);
                }
                out.push(')');
            }
            Gate::Mul(l, r) => {
                out.push_str("(* ");
                self.write_sexpr(*l, out);
                out.push(' ');
                self.write_sexpr(*r, out);
                out.push(')');
            }
        }
    }
}

fn release<E>(slots: &mut [Option<E>], uses: &mut [usize], gate: GateId) {
    uses[gate.0] -= 1;
    if uses[gate.0] == 0 {
        slots[gate.0] = None;
    }
}

/// One field multiplier per (addition gate, child position).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMultipliers {
    offsets: Vec<usize>,
    values: Vec<FieldElement>,
}

impl EdgeMultipliers {
    /// Every multiplier equal to one: the circuit's plain polynomial.
    pub fn ones(circuit: &Circuit) -> Self {
        let mut offsets = Vec::with_capacity(circuit.len() + 1);
        let mut count = 0;
        for gate in circuit.gates() {
            offsets.push(count);
            if let Gate::Add(children) = gate {
                count += children.len();
            }
        }
        offsets.push(count);
        EdgeMultipliers {
            offsets,
            values: vec![FieldElement::ONE; count],
        }
    }

    /// Multipliers listed in gate order, then child order.
    pub fn from_values(circuit: &Circuit, values: Vec<FieldElement>) -> Result<Self> {
        let mut m = Self::ones(circuit);
        if values.len() != m.values.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} multipliers, got {}",
                m.values.len(),
                values.len()
            )));
        }
        m.values = values;
        Ok(m)
    }

    #[inline]
    pub fn get(&self, gate: GateId, position: usize) -> FieldElement {
        self.values[self.offsets[gate.0] + position]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Text format

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

struct Lexed {
    token: Token,
    line: usize,
    column: usize,
}

fn lex(text: &str, source: &str) -> Result<Vec<Lexed>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split(';').next().unwrap_or("");
        let mut chars = line.char_indices().peekable();
        while let Some(&(col, ch)) = chars.peek() {
            let column = line[..col].chars().count() + 1;
            match ch {
                c if c.is_whitespace() => {
                    chars.next();
                }
                '(' | ')' => {
                    chars.next();
                    out.push(Lexed {
                        token: if ch == '(' { Token::Open } else { Token::Close },
                        line: lineno + 1,
                        column,
                    });
                }
                _ => {
                    let mut atom = String::new();
                    while let Some(&(_, c)) = chars.peek() {
                        if c.is_whitespace() || c == '(' || c == ')' {
                            break;
                        }
                        atom.push(c);
                        chars.next();
                    }
                    out.push(Lexed {
                        token: Token::Atom(atom),
                        line: lineno + 1,
                        column,
                    });
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::parse(source, 1, 1, "empty circuit"));
    }
    Ok(out)
}

fn is_variable(atom: &str) -> bool {
    let mut chars = atom.chars();
    chars.next() == Some('x')
        && atom.len() > 1
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses `(+ (* x1 x2) x3)`-style text. `+` takes one or more operands,
/// `*` one or more (folded left into binary gates). `;` starts a comment.
pub fn parse_circuit(text: &str, source: &str) -> Result<Circuit> {
    let tokens = lex(text, source)?;
    let mut circuit = Circuit::new();
    let mut pos = 0;
    let root = parse_expr(&tokens, &mut pos, &mut circuit, source)?;
    if let Some(extra) = tokens.get(pos) {
        return Err(Error::parse(
            source,
            extra.line,
            extra.column,
            "unexpected token after the expression",
        ));
    }
    circuit.set_output(root)?;
    Ok(circuit)
}

fn parse_expr(tokens: &[Lexed], pos: &mut usize, c: &mut Circuit, source: &str) -> Result<GateId> {
    let last = tokens.last().expect("nonempty");
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| Error::parse(source, last.line, last.column, "unexpected end of input"))?;
    *pos += 1;
    match &tok.token {
        Token::Close => Err(Error::parse(source, tok.line, tok.column, "unbalanced ')'")),
        Token::Atom(a) if is_variable(a) => {
            let v = c.add_var(a.clone());
            c.new_input(v)
        }
        Token::Atom(a) => Err(Error::parse(
            source,
            tok.line,
            tok.column,
            format!("unknown token '{a}'"),
        )),
        Token::Open => {
            let op = tokens.get(*pos).ok_or_else(|| {
                Error::parse(source, tok.line, tok.column, "unbalanced '('")
            })?;
            *pos += 1;
            let is_add = match &op.token {
                Token::Atom(a) if a == "+" => true,
                Token::Atom(a) if a == "*" => false,
                _ => {
                    return Err(Error::parse(
                        source,
                        op.line,
                        op.column,
                        "expected operator '+' or '*'",
                    ))
                }
            };
            let mut operands = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => {
                        return Err(Error::parse(source, tok.line, tok.column, "unbalanced '('"))
                    }
                    Some(Lexed {
                        token: Token::Close,
                        ..
                    }) => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => operands.push(parse_expr(tokens, pos, c, source)?),
                }
            }
            if operands.is_empty() {
                return Err(Error::parse(
                    source,
                    op.line,
                    op.column,
                    "operator needs at least one operand",
                ));
            }
            if is_add {
                c.new_add(operands)
            } else {
                let mut acc = operands[0];
                for &g in &operands[1..] {
                    acc = c.new_mul(acc, g)?;
                }
                Ok(acc)
            }
        }
    }
}

/// Human-readable dump, one gate per line.
pub fn describe(circuit: &Circuit) -> String {
    let mut s = String::new();
    for (i, g) in circuit.gates().iter().enumerate() {
        let _ = match g {
            Gate::Input(v) => writeln!(s, "{i}: input {}", circuit.var_name(*v)),
            Gate::Add(ch) => writeln!(
                s,
                "{i}: add {}",
                ch.iter().map(|c| c.0.to_string()).collect::<Vec<_>>().join(" ")
            ),
            Gate::Mul(l, r) => writeln!(s, "{i}: mul {} {}", l.0, r.0),
        };
    }
    s
}
