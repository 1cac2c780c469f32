//! Terminal conversation over the same pipeline the HTTP service runs.

use std::io::{self, BufRead, Write};

use faqbot::engine::{ChatReply, ChatStatus};
use faqbot::Engine;

pub const GREETING: &str = "Hi, How can I help you?";
pub const FOLLOW_UP: &str = "Was your question answered? (y/n)";
pub const QUIT: &str = ":quit";
const BOT: &str = "Chat Bot: ";
const USER: &str = "User: ";

/// Lines the bot says for a reply, without the speaker prefix.
pub fn render(reply: &ChatReply) -> Vec<String> {
    match reply.status {
        ChatStatus::Answer | ChatStatus::NoAnswer => vec![reply.answer.clone().unwrap_or_default()],
        ChatStatus::Spelling => reply
            .issues
            .iter()
            .flatten()
            .map(|issue| {
                if issue.suggestions.is_empty() {
                    format!("Please check the spelling of \"{}\".", issue.word)
                } else {
                    format!(
                        "Please check the spelling of \"{}\". Did you mean: {}?",
                        issue.word,
                        issue.suggestions.join(", ")
                    )
                }
            })
            .collect(),
        ChatStatus::InvalidSentence => {
            vec![
                "That does not look like a full question. Please include a noun and a verb.".into(),
            ]
        }
    }
}

fn read_line(input: &mut impl BufRead) -> io::Result<Option<String>> {
    let mut line = String::new();
    if input.read_line(&mut line)? == 0 {
        return Ok(None);
    }
    Ok(Some(line.trim().to_owned()))
}

enum Next {
    Continue,
    Stop,
}

fn follow_up<R: BufRead, W: Write>(
    engine: &Engine,
    question: &str,
    answer: &str,
    input: &mut R,
    out: &mut W,
) -> io::Result<Next> {
    loop {
        write!(out, "{FOLLOW_UP} ")?;
        out.flush()?;
        let Some(reply) = read_line(input)? else {
            writeln!(out)?;
            return Ok(Next::Stop);
        };
        match reply.to_lowercase().as_str() {
            "y" | "yes" => return Ok(Next::Continue),
            "n" | "no" => {
                match engine.handle_unsatisfied(question, answer) {
                    Ok(u) => match u.link {
                        Some(link) => {
                            writeln!(out, "{BOT}Sorry about that. This page may help: {link}")?
                        }
                        None => writeln!(
                            out,
                            "{BOT}Sorry about that. Your question has been recorded."
                        )?,
                    },
                    Err(e) => writeln!(out, "{BOT}error: {e}")?,
                }
                return Ok(Next::Continue);
            }
            QUIT => return Ok(Next::Stop),
            _ => {}
        }
    }
}

/// Runs the conversation until `:quit` or end of input.
pub fn run<R: BufRead, W: Write>(engine: &Engine, mut input: R, mut out: W) -> io::Result<()> {
    writeln!(out, "{BOT}{GREETING}")?;
    loop {
        write!(out, "{USER}")?;
        out.flush()?;
        let Some(question) = read_line(&mut input)? else {
            writeln!(out)?;
            return Ok(());
        };
        if question.is_empty() {
            continue;
        }
        if question == QUIT {
            return Ok(());
        }
        let reply = match engine.handle_chat(&question) {
            Ok(reply) => reply,
            Err(e) => {
                writeln!(out, "{BOT}error: {e}")?;
                continue;
            }
        };
        for line in render(&reply) {
            writeln!(out, "{BOT}{line}")?;
        }
        if let Some(answer) = &reply.answer {
            if let Next::Stop = follow_up(engine, &question, answer, &mut input, &mut out)? {
                return Ok(());
            }
        }
    }
}
