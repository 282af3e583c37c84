//! Terminal game loop against the engine.

use std::io::{self, BufRead, Write};

use cookie_core::game::{GameEngine, GamePosition, Status};
use cookie_core::Move;

#[derive(Debug)]
pub enum PlayError {
    Core(cookie_core::Error),
    Io(io::Error),
}

impl From<cookie_core::Error> for PlayError {
    fn from(e: cookie_core::Error) -> Self {
        PlayError::Core(e)
    }
}

impl From<io::Error> for PlayError {
    fn from(e: io::Error) -> Self {
        PlayError::Io(e)
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Input {
    Quit,
    Hint,
    Move(Move),
}

/// Parses `AMOUNT JAR [JAR...]` with 1-based jar numbers.
fn parse_input(line: &str, jars: usize) -> Result<Input, String> {
    let line = line.trim();
    match line {
        "q" | "quit" => return Ok(Input::Quit),
        "h" | "hint" => return Ok(Input::Hint),
        _ => {}
    }
    let nums = line
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| format!("not a number: {t}")))
        .collect::<Result<Vec<_>, _>>()?;
    let [amount, targets @ ..] = nums.as_slice() else {
        return Err("enter AMOUNT JAR [JAR...], h for a hint or q to quit".into());
    };
    if targets.is_empty() {
        return Err("choose at least one jar".into());
    }
    if let Some(&bad) = targets.iter().find(|&&j| j == 0 || j > jars) {
        return Err(format!("jar {bad} does not exist (1..={jars})"));
    }
    let mv = Move::new(*amount as u64, targets.iter().map(|j| j - 1));
    if mv.targets.len() != targets.len() {
        return Err("jar chosen twice".into());
    }
    Ok(Input::Move(mv))
}

fn show_move(mv: &Move) -> String {
    let jars: Vec<String> = mv.targets.iter().map(|i| (i + 1).to_string()).collect();
    let noun = if jars.len() == 1 { "jar" } else { "jars" };
    format!("take {} from {noun} {}", mv.amount, jars.join(", "))
}

pub fn play(
    start: GamePosition,
    engine_first: bool,
    out: &mut dyn Write,
    input: &mut dyn BufRead,
) -> Result<(), PlayError> {
    let engine = GameEngine::default();
    let mut pos = start;
    engine.classify(&pos)?;
    let mut engine_turn = engine_first;
    loop {
        if pos.is_terminal() {
            let msg = if engine_turn {
                "You win."
            } else {
                "The engine wins."
            };
            writeln!(out, "{pos}\n{msg}")?;
            return Ok(());
        }
        if engine_turn {
            let best = engine.best_move(&pos)?;
            writeln!(out, "engine: {} -> {}", show_move(&best.mv), best.successor)?;
            pos = best.successor;
            engine_turn = false;
            continue;
        }
        write!(out, "{pos} your move> ")?;
        out.flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            writeln!(out)?;
            return Ok(());
        }
        match parse_input(&line, pos.len()) {
            Ok(Input::Quit) => return Ok(()),
            Ok(Input::Hint) => {
                let class = engine.classify(&pos)?;
                match class.status {
                    Status::N => writeln!(out, "hint: {}", show_move(&class.winning_moves[0]))?,
                    Status::P => writeln!(out, "hint: every move loses against best play")?,
                }
            }
            Ok(Input::Move(mv)) => match pos.apply(&mv) {
                Ok(next) => {
                    pos = next;
                    engine_turn = true;
                }
                Err(e) => writeln!(out, "{e}")?,
            },
            Err(msg) => writeln!(out, "{msg}")?,
        }
    }
}
