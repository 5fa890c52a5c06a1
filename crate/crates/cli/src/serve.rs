//! One live session over a WebSocket. Every text message carries one JSON
//! object per line; the server answers with a snapshot per tick and a
//! result at the end.

use std::io::Write;
use std::net::IpAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use brainb_core::logkit::write_log;
use brainb_core::protocol::{apply_overrides, decode_client, ClientMessage, Inbound, ServerMessage};
use brainb_core::{PointerSample, PointerTrace, Session, SessionConfig};
use clap::Args;
use futures::{SinkExt, StreamExt};
use tokio::net::{TcpListener, TcpStream};
use tokio::time::MissedTickBehavior;
use tokio_tungstenite::tungstenite::Message;
use tokio_tungstenite::WebSocketStream;
use tracing::{info, warn};

use crate::artifacts::write_session;
use crate::settings::{validated, ConfigArgs};

#[derive(Args, Debug)]
pub struct ServeArgs {
    /// Port to listen on; 0 picks a free one.
    #[arg(long, default_value_t = 8765)]
    pub port: u16,

    #[arg(long, default_value = "127.0.0.1")]
    pub bind: IpAddr,

    #[arg(long)]
    pub seed: Option<u64>,

    #[command(flatten)]
    pub config: ConfigArgs,

    #[arg(long, env = "BRAINB_OUT_DIR", default_value = ".")]
    pub out: PathBuf,
}

pub fn cmd_serve(args: &ServeArgs) -> anyhow::Result<ExitCode> {
    let mut base = args.config.load()?;
    if let Some(seed) = args.seed {
        base.rng_seed = seed;
    }
    let base = validated(base)?;
    let runtime = tokio::runtime::Builder::new_current_thread()
        .enable_all()
        .build()
        .context("starting runtime")?;
    runtime.block_on(async {
        let listener = TcpListener::bind((args.bind, args.port))
            .await
            .with_context(|| format!("cannot listen on {}:{}", args.bind, args.port))?;
        let addr = listener.local_addr()?;
        println!("listening on ws://{addr}");
        std::io::stdout().flush()?;
        serve_one(listener, base, &args.out).await
    })?;
    Ok(ExitCode::SUCCESS)
}

fn decode_text(text: &str) -> Vec<ClientMessage> {
    let mut out = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        match decode_client(line) {
            Inbound::Message(msg) => out.push(msg),
            Inbound::Unknown(kind) => warn!(kind = %kind, "ignoring unknown message type"),
            Inbound::Malformed(err) => warn!(%err, "ignoring malformed message"),
        }
    }
    out
}

async fn send(ws: &mut WebSocketStream<TcpStream>, msg: &ServerMessage) -> anyhow::Result<()> {
    ws.send(Message::Text(msg.to_line())).await.context("sending to client")
}

async fn wait_for_start(ws: &mut WebSocketStream<TcpStream>, base: &SessionConfig) -> anyhow::Result<SessionConfig> {
    while let Some(frame) = ws.next().await {
        let text = match frame.context("reading from client")? {
            Message::Text(text) => text,
            Message::Close(_) => break,
            _ => continue,
        };
        for msg in decode_text(&text) {
            let ClientMessage::Start { config_overrides } = msg else {
                continue;
            };
            let mut config = base.clone();
            match apply_overrides(&mut config, &config_overrides) {
                Ok(()) => return Ok(config),
                Err(err) => warn!(%err, "rejected start overrides"),
            }
        }
    }
    bail!("client left before starting a session")
}

/// Trace of the ticks run so far. Its duration is cut to the elapsed ticks
/// so that partial logs replay too.
fn session_trace(session: &Session, samples: &[PointerSample]) -> Option<PointerTrace> {
    if session.elapsed_ticks == 0 {
        return None;
    }
    let config = SessionConfig { duration_ticks: session.elapsed_ticks, ..session.config.clone() };
    Some(PointerTrace::new(config, samples.to_vec(), &session.ledger).with_pauses(session.pause_ticks.clone()))
}

async fn serve_one(listener: TcpListener, base: SessionConfig, out: &Path) -> anyhow::Result<()> {
    let (stream, peer) = listener.accept().await.context("accepting client")?;
    info!(%peer, "client connected");
    let mut ws = tokio_tungstenite::accept_async(stream).await.context("websocket handshake")?;
    let config = wait_for_start(&mut ws, &base).await?;
    let stem = format!("live-seed{}", config.rng_seed);
    info!(duration_ticks = config.duration_ticks, tick_ms = config.tick_ms, "session started");

    let mut session = Session::new(config.clone())?;
    // Until the client reports otherwise the button is up.
    let mut pointer = PointerSample::released(0);
    let mut samples = Vec::with_capacity(config.duration_ticks as usize);
    send(&mut ws, &ServerMessage::snapshot(&session.snapshot(), &config)).await?;

    let mut ticker = tokio::time::interval(Duration::from_millis(u64::from(config.tick_ms)));
    ticker.set_missed_tick_behavior(MissedTickBehavior::Burst);
    ticker.tick().await;
    let mut client_left = false;
    while !session.is_finished() {
        tokio::select! {
            _ = ticker.tick() => {
                let sample = PointerSample { tick: session.elapsed_ticks, ..pointer };
                if session.run_tick(sample).is_some() {
                    samples.push(sample);
                }
                send(&mut ws, &ServerMessage::snapshot(&session.snapshot(), &config)).await?;
            }
            frame = ws.next() => {
                let text = match frame {
                    Some(Ok(Message::Text(text))) => text,
                    Some(Ok(Message::Close(_))) | None => {
                        client_left = true;
                        break;
                    }
                    Some(Err(err)) => {
                        warn!(%err, "connection error");
                        client_left = true;
                        break;
                    }
                    Some(Ok(_)) => continue,
                };
                for msg in decode_text(&text) {
                    match msg {
                        ClientMessage::Pointer { x, y, down } => {
                            pointer = PointerSample { x, y, button_down: down, tick: 0 };
                        }
                        ClientMessage::Pause => session.toggle_pause(),
                        ClientMessage::Save => {
                            let result = session.finalize(true)?;
                            let trace = session_trace(&session, &samples);
                            let save_stem = format!("{stem}-save{}", session.elapsed_ticks);
                            let written =
                                write_session(out, &save_stem, &result.record, &result.frame, &config, trace.as_ref())?;
                            info!(path = %written.log.display(), "saved");
                        }
                        ClientMessage::Start { .. } => warn!("session already running, start ignored"),
                    }
                }
            }
        }
    }

    let result = session.finalize(true)?;
    let trace = session_trace(&session, &samples);
    let written = write_session(out, &stem, &result.record, &result.frame, &config, trace.as_ref())?;
    info!(path = %written.log.display(), "session written");
    if client_left {
        warn!(elapsed = session.elapsed_ticks, "client left early, partial log written");
        return Ok(());
    }
    let log = write_log(&result.record)?;
    send(&mut ws, &ServerMessage::Result { kilobytes: result.record.kilobytes, log }).await?;
    ws.close(None).await.ok();
    Ok(())
}
