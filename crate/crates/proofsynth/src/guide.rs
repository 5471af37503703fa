//! Line protocol between the synthesizer and an external guide.
//!
//! Requests are `GUESS <type tokens>`; each is answered by exactly one line,
//! `TERM <term tokens>` or `NONE`. Tokens use the canonical space-joined text.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use proofsynth_core::search::GuideOracle;
use proofsynth_core::token::{encode_term, encode_type, lex_term, lex_type, Token};
use thiserror::Error;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GuideMessage {
    Guess(Vec<Token>),
    Term(Vec<Token>),
    None,
}

impl GuideMessage {
    pub fn encode(&self) -> String {
        match self {
            GuideMessage::Guess(t) => format!("GUESS {}", encode_type(t)),
            GuideMessage::Term(t) => format!("TERM {}", encode_term(t)),
            GuideMessage::None => "NONE".into(),
        }
    }

    /// Parses one line. Term replies are lexed leniently: a
    /// whitespace-separated chunk that is not a token sequence is dropped,
    /// since replies are repaired afterwards anyway.
    pub fn decode(line: &str) -> Result<Self, GuideError> {
        let line = line.trim_end_matches(['\r', '\n']);
        let (head, rest) = line.split_once(' ').unwrap_or((line, ""));
        match head {
            "GUESS" => lex_type(rest.trim()).map(GuideMessage::Guess).map_err(|e| GuideError::Malformed(e.to_string())),
            "TERM" => Ok(GuideMessage::Term(lex_lenient(rest))),
            "NONE" if rest.trim().is_empty() => Ok(GuideMessage::None),
            _ => Err(GuideError::Malformed(line.chars().take(80).collect())),
        }
    }
}

/// Term tokens of every chunk that lexes; other chunks are skipped.
pub fn lex_lenient(s: &str) -> Vec<Token> {
    lex_term(s).unwrap_or_else(|_| s.split_whitespace().filter_map(|c| lex_term(c).ok()).flatten().collect())
}

#[derive(Debug, Error)]
pub enum GuideError {
    #[error("could not start guide `{command}`: {source}")]
    Spawn { command: String, source: std::io::Error },
    #[error("guide I/O failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("guide exited without replying")]
    Closed,
    #[error("guide did not reply within {0:?}")]
    Timeout(Duration),
    #[error("malformed guide message: {0}")]
    Malformed(String),
}

/// A guide child process started with `sh -c <command>`.
pub struct ProcessGuide {
    child: Child,
    stdin: Option<ChildStdin>,
    replies: Receiver<std::io::Result<String>>,
    timeout: Duration,
}

impl ProcessGuide {
    pub fn spawn(command: &str, timeout: Duration) -> Result<Self, GuideError> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|source| GuideError::Spawn { command: command.into(), source })?;
        let stdout = child.stdout.take().expect("stdout is piped");
        let stdin = child.stdin.take();
        let (tx, replies) = mpsc::channel();
        // A reader thread lets a silent guide time out instead of blocking.
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(ProcessGuide { child, stdin, replies, timeout })
    }

    pub fn ask(&mut self, goal: &[Token]) -> Result<Option<Vec<Token>>, GuideError> {
        let stdin = self.stdin.as_mut().ok_or(GuideError::Closed)?;
        let sent = writeln!(stdin, "{}", GuideMessage::Guess(goal.to_vec()).encode()).and_then(|_| stdin.flush());
        if let Err(e) = sent {
            return Err(if e.kind() == std::io::ErrorKind::BrokenPipe { GuideError::Closed } else { e.into() });
        }
        let line = match self.replies.recv_timeout(self.timeout) {
            Ok(line) => line?,
            Err(RecvTimeoutError::Timeout) => return Err(GuideError::Timeout(self.timeout)),
            Err(RecvTimeoutError::Disconnected) => return Err(GuideError::Closed),
        };
        match GuideMessage::decode(&line)? {
            GuideMessage::Term(t) => Ok(Some(t)),
            GuideMessage::None => Ok(None),
            GuideMessage::Guess(_) => Err(GuideError::Malformed(line)),
        }
    }
}

impl GuideOracle for ProcessGuide {
    fn guess(&mut self, goal: &[Token]) -> Result<Option<Vec<Token>>, String> {
        self.ask(goal).map_err(|e| e.to_string())
    }
}

impl Drop for ProcessGuide {
    fn drop(&mut self) {
        drop(self.stdin.take());
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Guide side of the protocol: answers each request line with `answer`.
/// A malformed request is answered with `NONE` and reported through `log`.
pub fn serve<R, W, F, L>(input: R, mut output: W, mut answer: F, mut log: L) -> std::io::Result<usize>
where
    R: BufRead,
    W: Write,
    F: FnMut(&[Token]) -> Option<Vec<Token>>,
    L: FnMut(&str),
{
    let mut served = 0;
    for line in input.lines() {
        let line = line?;
        let reply = match GuideMessage::decode(&line) {
            Ok(GuideMessage::Guess(goal)) => answer(&goal).map_or(GuideMessage::None, GuideMessage::Term),
            Ok(_) | Err(_) => {
                log(&format!("malformed request: {line}"));
                GuideMessage::None
            }
        };
        writeln!(output, "{}", reply.encode())?;
        output.flush()?;
        served += 1;
    }
    Ok(served)
}
