use std::io::{self, BufRead, IsTerminal};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand};
use faqbot::auth::{bootstrap_admin, new_account};
use faqbot::config::ADMIN_PASSWORD_ENV;
use faqbot::http::{router, AppState};
use faqbot::store::{Category, FeedbackEntry, InfoEntry, LogEntry};
use faqbot::{evalkit, Config, Engine, Store};
use tower_http::services::ServeDir;

#[derive(Parser)]
#[command(name = "faqbot", version, about = "Admissions FAQ chatbot")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Path to the JSON config file.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP service until interrupted.
    Serve(ConfigArg),
    /// Replace the knowledge base with the rows of a JSON Lines file.
    Seed {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        file: PathBuf,
    },
    /// Talk to the bot in the terminal.
    Chat(ConfigArg),
    /// Print the label breakdown of logged questions and the feedback score.
    Eval(ConfigArg),
    /// Create an administrator. The password is read from the environment or a prompt.
    Adduser {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        username: String,
    },
    /// Assign a category to a logged question.
    Label {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        id: u64,
        #[arg(long, value_parser = PossibleValuesParser::new(Category::ALL.map(Category::as_str)))]
        category: String,
    },
}

fn load(arg: &ConfigArg) -> Result<Config> {
    Ok(Config::load(&arg.config)?)
}

fn open_store(cfg: &Config) -> Result<Store> {
    Ok(Store::open(&cfg.data_dir)?)
}

fn read_password() -> Result<String> {
    if let Some(p) = std::env::var(ADMIN_PASSWORD_ENV)
        .ok()
        .filter(|p| !p.is_empty())
    {
        return Ok(p);
    }
    if io::stdin().is_terminal() {
        return Ok(rpassword::prompt_password("Password: ")?);
    }
    let mut line = String::new();
    io::stdin().lock().read_line(&mut line)?;
    Ok(line.trim_end_matches(['\r', '\n']).to_owned())
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let terminate = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending().await,
        }
    };
    #[cfg(not(unix))]
    let terminate = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = terminate => {},
    }
}

fn serve(cfg: &Config) -> Result<()> {
    let engine = Arc::new(Engine::load(cfg)?);
    let store = engine.store().clone();
    let password = std::env::var(ADMIN_PASSWORD_ENV)
        .ok()
        .filter(|p| !p.is_empty());
    if bootstrap_admin(&store, &cfg.admin_username, password.as_deref())? {
        eprintln!("created administrator {}", cfg.admin_username);
    }
    if store.users().is_empty() {
        eprintln!("warning: no administrator; set {ADMIN_PASSWORD_ENV} or run `faqbot adduser`");
    }
    if store.list::<InfoEntry>().is_empty() {
        eprintln!("warning: knowledge base is empty; run `faqbot seed`");
    }

    let mut app = router(AppState::new(engine, cfg.session_ttl_hours));
    if let Some(dir) = &cfg.static_dir {
        app = app.fallback_service(ServeDir::new(dir));
    }
    let addr = SocketAddr::new(cfg.bind_address, cfg.port);
    tokio::runtime::Runtime::new()?.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .with_context(|| format!("cannot bind {addr}"))?;
        println!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, app)
            .with_graceful_shutdown(shutdown_signal())
            .await?;
        anyhow::Ok(())
    })?;
    store.flush()?;
    eprintln!("stopped");
    Ok(())
}

fn seed(cfg: &Config, file: &Path) -> Result<()> {
    let store = open_store(cfg)?;
    let n = store.seed(file)?;
    println!("seeded {n} entries into {}", store.dir().display());
    Ok(())
}

fn chat(cfg: &Config) -> Result<()> {
    let engine = Engine::load(cfg)?;
    if engine.store().list::<InfoEntry>().is_empty() {
        bail!("knowledge base is empty; run `faqbot seed` first");
    }
    faqbot_cli::repl::run(&engine, io::stdin().lock(), io::stdout().lock())?;
    Ok(())
}

fn eval(cfg: &Config) -> Result<()> {
    let store = open_store(cfg)?;
    print!(
        "{}",
        evalkit::render_table(&evalkit::breakdown(&store.list::<LogEntry>()))
    );
    let feedback = store.list::<FeedbackEntry>();
    println!("feedback        {:>7}", feedback.len());
    println!("overall score   {:>7.2}", evalkit::overall(&feedback));
    Ok(())
}

fn adduser(cfg: &Config, username: &str) -> Result<()> {
    let store = open_store(cfg)?;
    let password = read_password()?;
    store.add_user(new_account(username, &password)?)?;
    println!("added administrator {username}");
    Ok(())
}

fn label(cfg: &Config, id: u64, category: &str) -> Result<()> {
    let store = open_store(cfg)?;
    let log = evalkit::label(&store, id, category)?;
    println!("log {} labelled {category}: {}", log.id, log.question);
    Ok(())
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Serve(c) => serve(&load(&c)?),
        Command::Seed { config, file } => seed(&load(&config)?, &file),
        Command::Chat(c) => chat(&load(&c)?),
        Command::Eval(c) => eval(&load(&c)?),
        Command::Adduser { config, username } => adduser(&load(&config)?, &username),
        Command::Label {
            config,
            id,
            category,
        } => label(&load(&config)?, id, &category),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
