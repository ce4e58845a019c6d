//! Standalone TCP endpoints speaking the wire protocol: a per-server
//! process holding one storage column, and a client that drives a session
//! across `n` of them. Timeouts and connection failures are erasures, never
//! protocol errors: an absent server is exactly an unresponsive one.

use std::io;
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;
use std::time::Duration;

use thiserror::Error;

use crate::algebra::{FieldRef, Matrix};
use crate::pir::{decode_session, server_respond, PirError, RetrievalSession};

/// Per-round responses as delivered, `None` meaning erased.
pub type ResponseTranscript = Vec<Vec<Option<u64>>>;

use super::wire::{hello_for, Hello, WireError, WireMessage, ERR_FIELD, ERR_PROTOCOL};

#[derive(Debug, Error)]
pub enum NetError {
    #[error(transparent)]
    Wire(#[from] WireError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Pir(#[from] PirError),
    #[error("server field parameters disagree with the session")]
    FieldMismatch,
}

/// One storage server: immutable field parameters, a column that is either
/// preloaded or installed by a `STORE` frame, then query/response until
/// `BYE`.
pub struct ServerState {
    field: FieldRef,
    column: Mutex<Option<Vec<u64>>>,
}

impl ServerState {
    pub fn new(field: FieldRef, column: Option<Vec<u64>>) -> Arc<Self> {
        Arc::new(ServerState { field, column: Mutex::new(column) })
    }
}

fn handshake_matches(h: &Hello, field: &FieldRef) -> bool {
    h.p == field.p() && h.s == field.s() && h.modulus == field.modulus()
}

fn handle_connection(state: &ServerState, stream: &mut TcpStream) -> Result<(), NetError> {
    let width = state.field.element_width();
    let first = WireMessage::read_from(stream, width);
    let hello = match first {
        Ok(WireMessage::Hello(h)) => h,
        Ok(_) => {
            WireMessage::Error { code: ERR_PROTOCOL, message: "expected HELLO".into() }
                .write_to(stream, width)?;
            return Ok(());
        }
        Err(WireError::ProtocolVersionMismatch(v)) => {
            WireMessage::Error {
                code: super::wire::ERR_VERSION,
                message: format!("version {v} unsupported"),
            }
            .write_to(stream, width)?;
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    if !handshake_matches(&hello, &state.field) {
        WireMessage::Error { code: ERR_FIELD, message: "field parameters differ".into() }
            .write_to(stream, width)?;
        return Ok(());
    }
    // Acknowledge with our own parameters.
    let column_len = state.column.lock().unwrap().as_ref().map(|c| c.len()).unwrap_or(0);
    WireMessage::Hello(hello_for(
        &state.field,
        hello.server_count as usize,
        column_len.max(hello.query_len as usize),
    ))
    .write_to(stream, width)?;

    loop {
        match WireMessage::read_from(stream, width) {
            Ok(WireMessage::Store { column }) => {
                *state.column.lock().unwrap() = Some(column);
            }
            Ok(WireMessage::Query { round, elements }) => {
                let guard = state.column.lock().unwrap();
                let Some(column) = guard.as_ref() else {
                    drop(guard);
                    WireMessage::Error { code: ERR_PROTOCOL, message: "no column stored".into() }
                        .write_to(stream, width)?;
                    continue;
                };
                match server_respond(&state.field, column, &elements) {
                    Ok(element) => {
                        let msg = WireMessage::Response { round, element };
                        drop(guard);
                        msg.write_to(stream, width)?;
                    }
                    Err(_) => {
                        drop(guard);
                        WireMessage::Error {
                            code: ERR_PROTOCOL,
                            message: "query length mismatch".into(),
                        }
                        .write_to(stream, width)?;
                    }
                }
            }
            Ok(WireMessage::Bye) => return Ok(()),
            Ok(_) => {
                WireMessage::Error { code: ERR_PROTOCOL, message: "unexpected frame".into() }
                    .write_to(stream, width)?;
            }
            Err(WireError::Io(e)) if e.kind() == io::ErrorKind::UnexpectedEof => return Ok(()),
            Err(e) => return Err(e.into()),
        }
    }
}

/// Blocking accept loop. One logical connection per client; state is shared
/// so a `STORE` survives reconnects.
pub fn serve(listener: TcpListener, state: Arc<ServerState>) -> Result<(), NetError> {
    for stream in listener.incoming() {
        let mut stream = stream?;
        let state = state.clone();
        std::thread::spawn(move || {
            let _ = handle_connection(&state, &mut stream);
        });
    }
    Ok(())
}

/// Binds an ephemeral local port and serves in a background thread.
/// Returns the bound address; the thread runs until the process exits.
pub fn spawn_server(
    field: FieldRef,
    column: Option<Vec<u64>>,
) -> Result<(SocketAddr, JoinHandle<()>), NetError> {
    let listener = TcpListener::bind(("127.0.0.1", 0))?;
    let addr = listener.local_addr()?;
    let state = ServerState::new(field, column);
    let handle = std::thread::spawn(move || {
        let _ = serve(listener, state);
    });
    Ok((addr, handle))
}

/// Per-server connection state on the client side.
enum Link {
    Live(TcpStream),
    Dead,
}

/// Drives a whole session against `endpoints[j]` for server `j` and decodes
/// the file. Servers that cannot be reached, time out, or answer out of
/// protocol are treated as unresponsive from that point on.
pub fn client_retrieve(
    endpoints: &[SocketAddr],
    session: &RetrievalSession,
    field: &FieldRef,
    timeout: Duration,
) -> Result<(Matrix, ResponseTranscript), NetError> {
    let width = field.element_width();
    let n = session.server_count();
    if endpoints.len() != n {
        return Err(NetError::Pir(PirError::ShapeMismatch(format!(
            "{} endpoints for {n} servers",
            endpoints.len()
        ))));
    }
    let hello = hello_for(field, n, session.stacked_rows());

    let mut links: Vec<Link> = endpoints
        .iter()
        .map(|addr| match TcpStream::connect_timeout(addr, timeout) {
            Ok(stream) => {
                stream.set_read_timeout(Some(timeout)).ok();
                stream.set_write_timeout(Some(timeout)).ok();
                let mut stream = stream;
                let ok = WireMessage::Hello(hello.clone()).write_to(&mut stream, width).is_ok()
                    && matches!(
                        WireMessage::read_from(&mut stream, width),
                        Ok(WireMessage::Hello(h)) if handshake_matches(&h, field)
                    );
                if ok {
                    Link::Live(stream)
                } else {
                    Link::Dead
                }
            }
            Err(_) => Link::Dead,
        })
        .collect();

    let mut all_responses = Vec::with_capacity(session.round_count());
    for round in 0..session.round_count() {
        let queries = session.make_queries(round)?;
        // Issue the whole round before reading any response.
        for (j, link) in links.iter_mut().enumerate() {
            if let Link::Live(stream) = link {
                let msg = WireMessage::Query { round: round as u32, elements: queries[j].clone() };
                if msg.write_to(stream, width).is_err() {
                    *link = Link::Dead;
                }
            }
        }
        let mut row: Vec<Option<u64>> = Vec::with_capacity(n);
        for link in links.iter_mut() {
            match link {
                Link::Dead => row.push(None),
                Link::Live(stream) => match WireMessage::read_from(stream, width) {
                    Ok(WireMessage::Response { round: r, element }) if r as usize == round => {
                        row.push(Some(element));
                    }
                    _ => {
                        row.push(None);
                        *link = Link::Dead;
                    }
                },
            }
        }
        all_responses.push(row);
    }

    for link in links.iter_mut() {
        if let Link::Live(stream) = link {
            let _ = WireMessage::Bye.write_to(stream, width);
        }
    }

    let file = decode_session(session, &all_responses)?;
    Ok((file, all_responses))
}

/// Sends a `STORE` frame to a running server.
pub fn store_column(
    addr: &SocketAddr,
    field: &FieldRef,
    column: &[u64],
    timeout: Duration,
) -> Result<(), NetError> {
    let width = field.element_width();
    let mut stream = TcpStream::connect_timeout(addr, timeout)?;
    stream.set_read_timeout(Some(timeout)).ok();
    WireMessage::Hello(hello_for(field, 1, column.len())).write_to(&mut stream, width)?;
    match WireMessage::read_from(&mut stream, width)? {
        WireMessage::Hello(h) if handshake_matches(&h, field) => {}
        WireMessage::Error { message, .. } => {
            return Err(NetError::Pir(PirError::ShapeMismatch(message)))
        }
        _ => return Err(NetError::FieldMismatch),
    }
    WireMessage::Store { column: column.to_vec() }.write_to(&mut stream, width)?;
    WireMessage::Bye.write_to(&mut stream, width)?;
    Ok(())
}
