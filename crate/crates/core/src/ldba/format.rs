use super::{Ldba, LdbaError, SigmaEdge};
use crate::ltl::{parse_ltl, Alphabet, LtlError};

fn perr(line: usize, msg: impl Into<String>) -> LdbaError {
    LdbaError::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_index(line: usize, s: &str, what: &str) -> Result<usize, LdbaError> {
    s.parse::<usize>()
        .map_err(|_| perr(line, format!("invalid {what} `{s}`")))
}

/// Parses and validates an automaton in the line-oriented text format:
///
/// ```text
/// ap: y b r
/// states: 3
/// initial: 0
/// accepting: 1
/// 0 [true] -> 0
/// 0 eps -> 1
/// 1 [y] -> 1
/// 1 [!y] -> 2
/// 2 [true] -> 2
/// ```
///
/// `#` starts a comment. Guards use the propositional subset of the LTL
/// syntax. `eps` lines of one state are numbered `ε_0, ε_1, …` in file order.
pub fn load_ldba(text: &str) -> Result<Ldba, LdbaError> {
    let mut ap: Option<Alphabet> = None;
    let mut states: Option<usize> = None;
    let mut initial: Option<usize> = None;
    let mut accepting: Option<Vec<usize>> = None;
    // (line, src, guard, dst); guard None for eps
    let mut edges: Vec<(usize, usize, Option<String>, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some((key, value)) = header(content) {
            let value = value.trim();
            match key {
                "ap" => {
                    if ap.is_some() {
                        return Err(perr(line, "duplicate `ap:` header"));
                    }
                    let names: Vec<&str> = value.split_whitespace().collect();
                    ap = Some(Alphabet::from_names(&names).map_err(|e| perr(line, e.to_string()))?);
                }
                "states" => {
                    if states.is_some() {
                        return Err(perr(line, "duplicate `states:` header"));
                    }
                    states = Some(parse_index(line, value, "state count")?);
                }
                "initial" => {
                    if initial.is_some() {
                        return Err(perr(line, "duplicate `initial:` header"));
                    }
                    initial = Some(parse_index(line, value, "initial state")?);
                }
                "accepting" => {
                    if accepting.is_some() {
                        return Err(perr(line, "duplicate `accepting:` header"));
                    }
                    accepting = Some(
                        value
                            .split_whitespace()
                            .map(|s| parse_index(line, s, "accepting state"))
                            .collect::<Result<_, _>>()?,
                    );
                }
                other => return Err(perr(line, format!("unknown header `{other}`"))),
            }
            continue;
        }
        edges.push(edge(line, content)?);
    }

    let end = text.lines().count().max(1);
    let ap = ap.ok_or_else(|| perr(end, "missing `ap:` header"))?;
    let n = states.ok_or_else(|| perr(end, "missing `states:` header"))?;
    let initial = initial.ok_or_else(|| perr(end, "missing `initial:` header"))?;
    let accepting = accepting.unwrap_or_default();

    let mut sigma = vec![Vec::new(); n];
    let mut jumps = vec![Vec::new(); n];
    for (line, src, guard, dst) in edges {
        for s in [src, dst] {
            if s >= n {
                return Err(perr(line, format!("state {s} out of range (states: {n})")));
            }
        }
        match guard {
            None => jumps[src].push(dst),
            Some(g) => {
                let guard = parse_ltl(&g).map_err(|e| perr(line, format!("guard: {e}")))?;
                if !guard.is_propositional() {
                    return Err(perr(line, format!("guard `{g}` contains a temporal operator")));
                }
                if let Err(LtlError::UndeclaredAtom(a)) =
                    guard.eval_letter(&ap, crate::ltl::Letter::EMPTY)
                {
                    return Err(perr(line, format!("guard uses undeclared atom `{a}`")));
                }
                sigma[src].push(SigmaEdge { guard, target: dst });
            }
        }
    }
    Ldba::new(ap, n, initial, &accepting, sigma, jumps)
}

fn header(content: &str) -> Option<(&str, &str)> {
    let (key, value) = content.split_once(':')?;
    let key = key.trim();
    if key.chars().all(|c| c.is_ascii_alphabetic()) && !key.is_empty() {
        Some((key, value))
    } else {
        None
    }
}

fn edge(line: usize, content: &str) -> Result<(usize, usize, Option<String>, usize), LdbaError> {
    let (lhs, rhs) = content
        .rsplit_once("->")
        .ok_or_else(|| perr(line, "expected `<src> [guard] -> <dst>` or `<src> eps -> <dst>`"))?;
    let dst = parse_index(line, rhs.trim(), "target state")?;
    let lhs = lhs.trim();
    let (src, label) = lhs
        .split_once(char::is_whitespace)
        .ok_or_else(|| perr(line, "missing edge label"))?;
    let src = parse_index(line, src, "source state")?;
    let label = label.trim();
    if label == "eps" {
        return Ok((line, src, None, dst));
    }
    let guard = label
        .strip_prefix('[')
        .and_then(|l| l.strip_suffix(']'))
        .ok_or_else(|| perr(line, format!("expected `[guard]` or `eps`, found `{label}`")))?;
    Ok((line, src, Some(guard.to_string()), dst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn mutation_breaking_determinism() {
        let text = fixtures::FGY_LDBA.replace("1 [!y] -> 2", "1 [true] -> 2");
        assert!(matches!(
            load_ldba(&text),
            Err(LdbaError::NonDeterministic { state: 1, .. })
        ));
    }

    #[test]
    fn mutation_breaking_totality() {
        let text = fixtures::FGY_LDBA.replace("1 [!y] -> 2", "");
        let err = load_ldba(&text).unwrap_err();
        assert!(matches!(err, LdbaError::Partial { state: 1, .. }));
        assert!(err.to_string().starts_with("partial guards"));
    }

    #[test]
    fn jump_on_accepting_state() {
        let text = format!("{}\n1 eps -> 2\n", fixtures::FGY_LDBA);
        let err = load_ldba(&text).unwrap_err();
        assert_eq!(err, LdbaError::JumpInDeterministicPart(1));
        assert!(err.to_string().starts_with("jump inside deterministic part"));
    }

    #[test]
    fn jump_reachable_from_jump_target() {
        // 2 is Σ-reachable from the jump target 1, so it may not jump; the
        // new target 0 also enters S_D while still carrying its own jump
        let text = format!("{}\n2 eps -> 0\n", fixtures::FGY_LDBA);
        assert!(matches!(load_ldba(&text), Err(LdbaError::JumpInDeterministicPart(0 | 2))));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "ap: y\nstates: 2\ninitial: 0\naccepting: 1\n0 [y & ] -> 1\n";
        match load_ldba(text) {
            Err(LdbaError::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
        let text = "ap: y\nstates: 2\ninitial: 0\n0 [y] => 1\n";
        assert!(matches!(load_ldba(text), Err(LdbaError::Parse { line: 4, .. })));
        let text = "ap: y\nstates: 2\ninitial: 0\n0 [q] -> 1\n0 [!q] -> 0\n";
        assert!(matches!(load_ldba(text), Err(LdbaError::Parse { line: 4, .. })));
        let text = "ap: y\nstates: 2\ninitial: 0\n0 [F y] -> 1\n";
        assert!(matches!(load_ldba(text), Err(LdbaError::Parse { line: 4, .. })));
        let text = "ap: y\nstates: 2\ninitial: 0\n0 [y] -> 5\n";
        assert!(matches!(load_ldba(text), Err(LdbaError::Parse { line: 4, .. })));
        let text = "states: 2\ninitial: 0\n";
        assert!(matches!(load_ldba(text), Err(LdbaError::Parse { .. })));
    }

    #[test]
    fn out_of_range_headers() {
        let text = "ap: y\nstates: 1\ninitial: 3\n0 [true] -> 0\n";
        assert!(matches!(load_ldba(text), Err(LdbaError::StateOutOfRange { state: 3, .. })));
        let text = "ap: y\nstates: 1\ninitial: 0\naccepting: 4\n0 [true] -> 0\n";
        assert!(matches!(load_ldba(text), Err(LdbaError::StateOutOfRange { state: 4, .. })));
    }

    #[test]
    fn jumps_numbered_in_file_order() {
        let text = "ap: a\nstates: 3\ninitial: 0\naccepting: 1 2\n\
                    0 [true] -> 0\n0 eps -> 2\n0 eps -> 1\n1 [true] -> 1\n2 [true] -> 2\n";
        let a = load_ldba(text).unwrap();
        assert_eq!(a.jumps(0), &[2, 1]);
        assert_eq!(a.step_jump(0, 1), Ok(1));
    }
}
