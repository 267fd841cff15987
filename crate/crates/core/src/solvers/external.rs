//! Runs a solver binary that reads DIMACS CNF and answers in the
//! competition output format (`s` and `v` lines, exit codes 10/20).

use std::{
    io::Write,
    path::PathBuf,
    process::{Command, Stdio},
};

use crate::{
    instances::Cnf,
    io::dimacs,
    types::{Assignment, Clause, Lit, TernaryVal, Var},
};

use super::{Solve, SolverError, SolverResult, SolverState};

/// Placeholder in the argument list replaced by the input file path
pub const INPUT_PLACEHOLDER: &str = "{input}";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InputMode {
    /// The instance is written to a temporary file passed as argument
    #[default]
    TempFile,
    /// The instance is piped to the solver's stdin
    Stdin,
}

#[derive(Debug)]
enum State {
    Input,
    Sat(Assignment),
    Unsat,
    Interrupted,
}

/// A solver binary driven through files and process exit codes.
///
/// In [`InputMode::TempFile`], every argument containing
/// [`INPUT_PLACEHOLDER`] has it replaced by the path of the instance file.
/// Without any placeholder the path is appended as last argument.
#[derive(Debug)]
pub struct ExternalSolver {
    program: PathBuf,
    args: Vec<String>,
    input: InputMode,
    cnf: Cnf,
    max_var: Option<Var>,
    state: State,
}

impl ExternalSolver {
    pub fn new<P: Into<PathBuf>>(program: P) -> Self {
        ExternalSolver {
            program: program.into(),
            args: vec![],
            input: InputMode::default(),
            cnf: Cnf::new(),
            max_var: None,
            state: State::Input,
        }
    }

    pub fn with_args<I, S>(mut self, args: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.args = args.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_input_mode(mut self, input: InputMode) -> Self {
        self.input = input;
        self
    }

    fn n_vars(&self) -> u32 {
        self.max_var.map_or(0, |v| v.idx32() + 1)
    }

    fn dimacs(&self) -> Result<Vec<u8>, SolverError> {
        let mut buf = Vec::new();
        dimacs::write_cnf(&mut buf, &self.cnf, self.n_vars())?;
        Ok(buf)
    }

    fn run(&self) -> Result<(std::process::ExitStatus, String), SolverError> {
        let input = self.dimacs()?;
        let output = match self.input {
            InputMode::TempFile => {
                let mut file = tempfile::Builder::new().suffix(".cnf").tempfile()?;
                file.write_all(&input)?;
                file.flush()?;
                let path = file.path().to_string_lossy().into_owned();
                let mut args: Vec<String> = self.args.iter().map(|a| a.replace(INPUT_PLACEHOLDER, &path)).collect();
                if !self.args.iter().any(|a| a.contains(INPUT_PLACEHOLDER)) {
                    args.push(path);
                }
                Command::new(&self.program)
                    .args(&args)
                    .stdin(Stdio::null())
                    .stderr(Stdio::null())
                    .output()?
            }
            InputMode::Stdin => {
                let mut child = Command::new(&self.program)
                    .args(&self.args)
                    .stdin(Stdio::piped())
                    .stdout(Stdio::piped())
                    .stderr(Stdio::null())
                    .spawn()?;
                let mut stdin = child.stdin.take().expect("stdin is piped");
                // a solver may exit without reading its input
                let write_res = stdin.write_all(&input);
                drop(stdin);
                let output = child.wait_with_output()?;
                if let Err(err) = write_res {
                    if err.kind() != std::io::ErrorKind::BrokenPipe {
                        return Err(err.into());
                    }
                }
                output
            }
        };
        Ok((output.status, String::from_utf8_lossy(&output.stdout).into_owned()))
    }

    fn interpret(&self, code: Option<i32>, stdout: &str) -> Result<State, SolverError> {
        let mut status = None;
        let mut values = vec![];
        for line in stdout.lines() {
            let line = line.trim_start();
            if let Some(rest) = line.strip_prefix("s ") {
                status = Some(rest.trim().to_string());
            } else if let Some(rest) = line.strip_prefix("v ") {
                for tok in rest.split_whitespace() {
                    let val: i64 = tok
                        .parse()
                        .map_err(|_| SolverError::Protocol(format!("invalid value literal `{tok}`")))?;
                    values.push(val);
                }
            }
        }
        let status = status.ok_or_else(|| SolverError::Protocol("no status line".to_string()))?;
        let (state, expected) = match status.as_str() {
            "SATISFIABLE" => (State::Sat(Assignment::new()), 10),
            "UNSATISFIABLE" => (State::Unsat, 20),
            "UNKNOWN" => (State::Interrupted, 0),
            other => return Err(SolverError::Protocol(format!("unknown status `{other}`"))),
        };
        if code != Some(expected) {
            let code = code.map_or_else(|| "none".to_string(), |c| c.to_string());
            return Err(SolverError::Protocol(format!(
                "status `{status}` with exit code {code}, expected {expected}"
            )));
        }
        let State::Sat(mut assign) = state else {
            return Ok(state);
        };
        let n_vars = i64::from(self.n_vars());
        assign.resize(n_vars as usize);
        for val in values {
            if val == 0 {
                break;
            }
            if val.abs() > n_vars {
                return Err(SolverError::Protocol(format!(
                    "value literal {val} outside the declared {n_vars} variables"
                )));
            }
            let lit = Lit::from_ipasir(val as i32).expect("checked range");
            assign.assign_lit(lit);
        }
        Ok(State::Sat(assign))
    }

    fn coarse_state(&self) -> SolverState {
        match self.state {
            State::Input => SolverState::Input,
            State::Sat(_) => SolverState::Sat,
            State::Unsat => SolverState::Unsat,
            State::Interrupted => SolverState::Interrupted,
        }
    }
}

impl Solve for ExternalSolver {
    fn signature(&self) -> String {
        format!("external:{}", self.program.display())
    }

    fn add_clause(&mut self, cl: Clause) -> Result<(), SolverError> {
        self.state = State::Input;
        self.max_var = self.max_var.max(cl.max_var());
        self.cnf.add_clause(cl);
        Ok(())
    }

    fn solve(&mut self) -> Result<SolverResult, SolverError> {
        self.state = State::Input;
        let (status, stdout) = self.run()?;
        self.state = self.interpret(status.code(), &stdout)?;
        Ok(match self.state {
            State::Sat(_) => SolverResult::Sat,
            State::Unsat => SolverResult::Unsat,
            _ => SolverResult::Interrupted,
        })
    }

    fn lit_val(&self, lit: Lit) -> Result<TernaryVal, SolverError> {
        match &self.state {
            State::Sat(assign) => Ok(assign.lit_value(lit)),
            _ => Err(SolverError::State {
                required: SolverState::Sat,
                actual: self.coarse_state(),
            }),
        }
    }

    fn max_var(&self) -> Option<Var> {
        self.max_var
    }
}
