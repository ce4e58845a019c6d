//! Protocol transport: an in-memory adversarial bus for tests and a
//! minimal binary wire protocol with standalone server and client
//! endpoints. In-memory and over-the-wire runs with the same seed produce
//! identical transcripts and files.

mod bus;
mod endpoints;
mod wire;

pub use bus::{bus_retrieve, bus_run, replay, BusAdversary, BusRun, MutationRule, SessionExport};
pub use endpoints::{client_retrieve, serve, spawn_server, store_column, NetError, ServerState};
pub use wire::{
    hello_for, Hello, WireError, WireMessage, ERR_FIELD, ERR_PROTOCOL, ERR_VERSION, MAGIC,
    TAG_BYE, TAG_ERROR, TAG_HELLO, TAG_QUERY, TAG_RESPONSE, TAG_STORE, VERSION,
};
