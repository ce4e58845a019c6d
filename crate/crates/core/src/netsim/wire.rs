//! The binary wire format.
//!
//! Frame: magic `SPIR`, version byte 1, tag byte, 4-byte big-endian payload
//! length, payload. Lengths, counts and round ids are big-endian; field
//! elements are little-endian in `w = ceil(bits(q-1)/8)` bytes each.

use std::io::{self, Read, Write};

use thiserror::Error;

use crate::algebra::FieldRef;

pub const MAGIC: [u8; 4] = *b"SPIR";
pub const VERSION: u8 = 1;

pub const TAG_HELLO: u8 = 0x01;
pub const TAG_STORE: u8 = 0x02;
pub const TAG_QUERY: u8 = 0x03;
pub const TAG_RESPONSE: u8 = 0x04;
pub const TAG_ERROR: u8 = 0x05;
pub const TAG_BYE: u8 = 0x06;

#[derive(Debug, Error)]
pub enum WireError {
    #[error("bad magic")]
    BadMagic,
    #[error("protocol version {0} unsupported")]
    ProtocolVersionMismatch(u8),
    #[error("unknown tag {0:#04x}")]
    UnknownTag(u8),
    #[error("payload length {got} does not match tag {tag:#04x} (expected {expected})")]
    PayloadLength { tag: u8, got: usize, expected: String },
    #[error("field parameters disagree")]
    FieldMismatch,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Field and system parameters exchanged in the handshake.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hello {
    pub p: u64,
    pub s: u32,
    pub modulus: Vec<u64>,
    pub server_count: u32,
    /// Query vector length (`m * b` stacked rows).
    pub query_len: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WireMessage {
    Hello(Hello),
    /// The server's stored column.
    Store { column: Vec<u64> },
    Query { round: u32, elements: Vec<u64> },
    Response { round: u32, element: u64 },
    Error { code: u8, message: String },
    Bye,
}

fn element_to_bytes(v: u64, width: usize, out: &mut Vec<u8>) {
    out.extend_from_slice(&v.to_le_bytes()[..width]);
}

fn element_from_bytes(bytes: &[u8]) -> u64 {
    let mut buf = [0u8; 8];
    buf[..bytes.len()].copy_from_slice(bytes);
    u64::from_le_bytes(buf)
}

impl WireMessage {
    pub fn tag(&self) -> u8 {
        match self {
            WireMessage::Hello(_) => TAG_HELLO,
            WireMessage::Store { .. } => TAG_STORE,
            WireMessage::Query { .. } => TAG_QUERY,
            WireMessage::Response { .. } => TAG_RESPONSE,
            WireMessage::Error { .. } => TAG_ERROR,
            WireMessage::Bye => TAG_BYE,
        }
    }

    /// Serializes the full frame. `width` is the per-element byte width of
    /// the session's field.
    pub fn encode(&self, width: usize) -> Vec<u8> {
        let mut payload = Vec::new();
        match self {
            WireMessage::Hello(h) => {
                payload.extend_from_slice(&h.p.to_be_bytes());
                payload.extend_from_slice(&h.s.to_be_bytes());
                payload.extend_from_slice(&(h.modulus.len() as u32).to_be_bytes());
                for &c in &h.modulus {
                    payload.extend_from_slice(&c.to_be_bytes());
                }
                payload.extend_from_slice(&h.server_count.to_be_bytes());
                payload.extend_from_slice(&h.query_len.to_be_bytes());
            }
            WireMessage::Store { column } => {
                payload.extend_from_slice(&(column.len() as u32).to_be_bytes());
                for &v in column {
                    element_to_bytes(v, width, &mut payload);
                }
            }
            WireMessage::Query { round, elements } => {
                payload.extend_from_slice(&round.to_be_bytes());
                for &v in elements {
                    element_to_bytes(v, width, &mut payload);
                }
            }
            WireMessage::Response { round, element } => {
                payload.extend_from_slice(&round.to_be_bytes());
                element_to_bytes(*element, width, &mut payload);
            }
            WireMessage::Error { code, message } => {
                payload.push(*code);
                payload.extend_from_slice(message.as_bytes());
            }
            WireMessage::Bye => {}
        }
        let mut frame = Vec::with_capacity(10 + payload.len());
        frame.extend_from_slice(&MAGIC);
        frame.push(VERSION);
        frame.push(self.tag());
        frame.extend_from_slice(&(payload.len() as u32).to_be_bytes());
        frame.extend_from_slice(&payload);
        frame
    }

    /// Reads one frame. `width` as in [`WireMessage::encode`].
    pub fn read_from(reader: &mut impl Read, width: usize) -> Result<WireMessage, WireError> {
        let mut head = [0u8; 10];
        reader.read_exact(&mut head)?;
        if head[0..4] != MAGIC {
            return Err(WireError::BadMagic);
        }
        if head[4] != VERSION {
            return Err(WireError::ProtocolVersionMismatch(head[4]));
        }
        let tag = head[5];
        let len = u32::from_be_bytes([head[6], head[7], head[8], head[9]]) as usize;
        let mut payload = vec![0u8; len];
        reader.read_exact(&mut payload)?;
        Self::decode_payload(tag, &payload, width)
    }

    fn decode_payload(tag: u8, payload: &[u8], width: usize) -> Result<WireMessage, WireError> {
        let err = |expected: &str| WireError::PayloadLength {
            tag,
            got: payload.len(),
            expected: expected.to_string(),
        };
        match tag {
            TAG_HELLO => {
                if payload.len() < 16 {
                    return Err(err("at least 16 bytes"));
                }
                let p = u64::from_be_bytes(payload[0..8].try_into().unwrap());
                let s = u32::from_be_bytes(payload[8..12].try_into().unwrap());
                let count = u32::from_be_bytes(payload[12..16].try_into().unwrap()) as usize;
                let need = 16 + count * 8 + 8;
                if payload.len() != need {
                    return Err(err(&format!("{need} bytes")));
                }
                let mut modulus = Vec::with_capacity(count);
                for i in 0..count {
                    let at = 16 + i * 8;
                    modulus.push(u64::from_be_bytes(payload[at..at + 8].try_into().unwrap()));
                }
                let at = 16 + count * 8;
                let server_count = u32::from_be_bytes(payload[at..at + 4].try_into().unwrap());
                let query_len = u32::from_be_bytes(payload[at + 4..at + 8].try_into().unwrap());
                Ok(WireMessage::Hello(Hello { p, s, modulus, server_count, query_len }))
            }
            TAG_STORE => {
                if payload.len() < 4 {
                    return Err(err("at least 4 bytes"));
                }
                let count = u32::from_be_bytes(payload[0..4].try_into().unwrap()) as usize;
                if payload.len() != 4 + count * width {
                    return Err(err(&format!("{} bytes", 4 + count * width)));
                }
                let column = (0..count)
                    .map(|i| element_from_bytes(&payload[4 + i * width..4 + (i + 1) * width]))
                    .collect();
                Ok(WireMessage::Store { column })
            }
            TAG_QUERY => {
                if payload.len() < 4 || !(payload.len() - 4).is_multiple_of(width) {
                    return Err(err("4 bytes plus a whole number of elements"));
                }
                let round = u32::from_be_bytes(payload[0..4].try_into().unwrap());
                let elements = payload[4..]
                    .chunks(width)
                    .map(element_from_bytes)
                    .collect();
                Ok(WireMessage::Query { round, elements })
            }
            TAG_RESPONSE => {
                if payload.len() != 4 + width {
                    return Err(err(&format!("{} bytes", 4 + width)));
                }
                let round = u32::from_be_bytes(payload[0..4].try_into().unwrap());
                let element = element_from_bytes(&payload[4..]);
                Ok(WireMessage::Response { round, element })
            }
            TAG_ERROR => {
                if payload.is_empty() {
                    return Err(err("at least 1 byte"));
                }
                Ok(WireMessage::Error {
                    code: payload[0],
                    message: String::from_utf8_lossy(&payload[1..]).into_owned(),
                })
            }
            TAG_BYE => {
                if !payload.is_empty() {
                    return Err(err("empty payload"));
                }
                Ok(WireMessage::Bye)
            }
            other => Err(WireError::UnknownTag(other)),
        }
    }

    pub fn write_to(&self, writer: &mut impl Write, width: usize) -> Result<(), WireError> {
        writer.write_all(&self.encode(width))?;
        writer.flush()?;
        Ok(())
    }
}

pub fn hello_for(field: &FieldRef, server_count: usize, query_len: usize) -> Hello {
    Hello {
        p: field.p(),
        s: field.s(),
        modulus: field.modulus().to_vec(),
        server_count: server_count as u32,
        query_len: query_len as u32,
    }
}

/// Error codes carried by `ERROR` frames.
pub const ERR_VERSION: u8 = 1;
pub const ERR_FIELD: u8 = 2;
pub const ERR_PROTOCOL: u8 = 3;
