//! Cubic monotone 3-CNF instances and the small-instance one-in-three
//! reference decision.

use std::fmt::Write as _;

/// A negation-free 3-CNF in which every variable occurs in exactly three
/// clauses. Clauses are triples of distinct variable indexes; the variable
/// count consequently equals the clause count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfInstance {
    variables: Vec<String>,
    clauses: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CnfError {
    #[error("variable `{name}` occurs in {count} clauses instead of 3")]
    VariableArity { name: String, count: usize },
    #[error("clause {index} has {count} literals instead of 3")]
    ClauseArity { index: usize, count: usize },
    #[error("clause {index} mentions `{name}` twice")]
    DuplicateVarInClause { index: usize, name: String },
    #[error("instance has no clauses")]
    Empty,
    #[error("instance exceeds the brute-force bound of {max} variables")]
    TooLarge { max: usize },
}

impl CnfInstance {
    /// Builds and validates an instance from clauses of variable names.
    /// Variables are indexed in first-occurrence order.
    pub fn new(clauses: &[Vec<String>]) -> Result<CnfInstance, CnfError> {
        if clauses.is_empty() {
            return Err(CnfError::Empty);
        }
        let mut variables: Vec<String> = Vec::new();
        let mut index = std::collections::HashMap::new();
        let mut out: Vec<[usize; 3]> = Vec::new();
        for (ci, clause) in clauses.iter().enumerate() {
            if clause.len() != 3 {
                return Err(CnfError::ClauseArity {
                    index: ci,
                    count: clause.len(),
                });
            }
            let mut ixs = [0usize; 3];
            for (j, name) in clause.iter().enumerate() {
                let ix = *index.entry(name.clone()).or_insert_with(|| {
                    variables.push(name.clone());
                    variables.len() - 1
                });
                if ixs[..j].contains(&ix) {
                    return Err(CnfError::DuplicateVarInClause {
                        index: ci,
                        name: name.clone(),
                    });
                }
                ixs[j] = ix;
            }
            out.push(ixs);
        }
        let mut counts = vec![0usize; variables.len()];
        for clause in &out {
            for &v in clause {
                counts[v] += 1;
            }
        }
        for (v, &count) in counts.iter().enumerate() {
            if count != 3 {
                return Err(CnfError::VariableArity {
                    name: variables[v].clone(),
                    count,
                });
            }
        }
        Ok(CnfInstance {
            variables,
            clauses: out,
        })
    }

    pub fn n_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn n_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn variable_name(&self, v: usize) -> &str {
        &self.variables[v]
    }

    /// Clause `i` as variable indexes, in clause order.
    pub fn clause(&self, i: usize) -> [usize; 3] {
        self.clauses[i]
    }

    pub fn clauses(&self) -> &[[usize; 3]] {
        &self.clauses
    }

    /// True if `model` (a variable-index set) hits every clause exactly once.
    pub fn is_one_in_three_model(&self, model: &[usize]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().filter(|v| model.contains(v)).count() == 1)
    }
}

/// Smallest (by subset bitmask over the variable order) one-in-three model,
/// or `None`. Enumerates all subsets, so the instance is capped at 25
/// variables.
pub fn one_in_three_bruteforce(cnf: &CnfInstance) -> Result<Option<Vec<usize>>, CnfError> {
    let n = cnf.n_variables();
    if n > 25 {
        return Err(CnfError::TooLarge { max: 25 });
    }
    for mask in 0u32..1 << n {
        let ok = cnf.clauses().iter().all(|c| {
            c.iter().filter(|&&v| mask >> v & 1 == 1).count() == 1
        });
        if ok {
            return Ok(Some((0..n).filter(|&v| mask >> v & 1 == 1).collect()));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Text codec
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CnfParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Invalid(#[from] CnfError),
}

/// Parses the CNF format: a `cnf` header and one `clause <v1> <v2> <v3>`
/// line per clause; variables are implicit.
pub fn parse_cnf(input: &str) -> Result<CnfInstance, CnfParseError> {
    let mut clauses: Vec<Vec<String>> = Vec::new();
    let mut saw_header = false;
    for (lineno, raw) in input.lines().enumerate() {
        let line = match raw.find('#') {
            Some(ix) => raw[..ix].trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        match parts.next().unwrap() {
            "cnf" => saw_header = true,
            "clause" => {
                clauses.push(parts.map(str::to_string).collect());
            }
            other => {
                return Err(CnfParseError::Syntax {
                    line: lineno + 1,
                    msg: format!("unknown keyword `{other}`"),
                })
            }
        }
    }
    if !saw_header {
        return Err(CnfParseError::Syntax {
            line: 0,
            msg: "missing `cnf` header".into(),
        });
    }
    Ok(CnfInstance::new(&clauses)?)
}

pub fn serialize_cnf(cnf: &CnfInstance) -> String {
    let mut out = String::from("cnf\n");
    for clause in cnf.clauses() {
        let _ = writeln!(
            out,
            "clause {} {} {}",
            cnf.variable_name(clause[0]),
            cnf.variable_name(clause[1]),
            cnf.variable_name(clause[2])
        );
    }
    out
}

/// The triple-clause instance over three variables; its first model is the
/// first variable alone.
pub fn tiny_instance() -> CnfInstance {
    let clause = vec!["x".to_string(), "y".to_string(), "z".to_string()];
    CnfInstance::new(&[clause.clone(), clause.clone(), clause]).unwrap()
}

/// The six-clause example instance over variables `X0..X5`.
pub fn six_clause_instance() -> CnfInstance {
    let c = |a: usize, b: usize, c: usize| {
        vec![format!("X{a}"), format!("X{b}"), format!("X{c}")]
    };
    CnfInstance::new(&[
        c(0, 1, 2),
        c(2, 0, 3),
        c(1, 3, 0),
        c(2, 4, 5),
        c(1, 5, 4),
        c(4, 3, 5),
    ])
    .unwrap()
}

/// A four-clause instance without a one-in-three model: every variable pair
/// shares a clause, so any model of size two or more double-hits one, while
/// singletons miss one.
pub fn no_model_instance() -> CnfInstance {
    let c = |a: &str, b: &str, c: &str| vec![a.to_string(), b.to_string(), c.to_string()];
    CnfInstance::new(&[
        c("a", "b", "c"),
        c("a", "b", "d"),
        c("a", "c", "d"),
        c("b", "c", "d"),
    ])
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_instance_is_valid_with_model_x() {
        let cnf = tiny_instance();
        assert_eq!(cnf.n_clauses(), 3);
        assert_eq!(one_in_three_bruteforce(&cnf).unwrap(), Some(vec![0]));
    }

    #[test]
    fn six_clause_instance_model() {
        let cnf = six_clause_instance();
        assert_eq!(cnf.n_variables(), 6);
        let model = one_in_three_bruteforce(&cnf).unwrap().unwrap();
        let names: Vec<&str> = model.iter().map(|&v| cnf.variable_name(v)).collect();
        assert_eq!(names, ["X0", "X4"]);
        assert!(cnf.is_one_in_three_model(&model));
    }

    #[test]
    fn no_model_instance_has_none() {
        let cnf = no_model_instance();
        assert_eq!(cnf.n_clauses(), 4);
        assert_eq!(one_in_three_bruteforce(&cnf).unwrap(), None);
    }

    #[test]
    fn duplicate_variable_in_clause_rejected() {
        let clause = vec!["x".to_string(), "x".to_string(), "y".to_string()];
        assert!(matches!(
            CnfInstance::new(&[clause]),
            Err(CnfError::DuplicateVarInClause { .. })
        ));
    }

    #[test]
    fn wrong_arity_rejected() {
        let c1 = vec!["x".to_string(), "y".to_string(), "z".to_string()];
        assert!(matches!(
            CnfInstance::new(&[c1]),
            Err(CnfError::VariableArity { .. })
        ));
    }

    #[test]
    fn codec_round_trip() {
        let cnf = six_clause_instance();
        let text = serialize_cnf(&cnf);
        let back = parse_cnf(&text).unwrap();
        assert_eq!(back, cnf);
    }
}
