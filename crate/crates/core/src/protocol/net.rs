//! One handshake over a byte stream. Frames alternate strictly:
//! Alice sends first in every round, Bob answers.

use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::net::TcpStream;
use std::time::Duration;

use super::wire::{self, Hello};
use super::{
    alice_finish, alice_message, bob_finish, bob_message, confirm, keygen_alice, keygen_bob, PublicParams, SharedKey,
    Transcript,
};
use crate::error::{Error, Result};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Role {
    Alice,
    Bob,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Alice => "alice",
            Role::Bob => "bob",
        })
    }
}

impl std::str::FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alice" => Ok(Role::Alice),
            "bob" => Ok(Role::Bob),
            _ => Err(Error::invalid(format!("role must be alice or bob, got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SessionOutcome {
    pub key: SharedKey,
    pub transcript: Transcript,
    pub own_confirm: String,
    pub peer_confirm: String,
}

impl SessionOutcome {
    pub fn confirmed(&self) -> bool {
        self.own_confirm == self.peer_confirm
    }
}

struct Channel<R, W> {
    reader: R,
    writer: W,
}

impl<R: BufRead, W: Write> Channel<R, W> {
    fn send(&mut self, text: &str) -> Result<()> {
        self.writer.write_all(text.as_bytes())?;
        self.writer.flush()?;
        Ok(())
    }

    fn recv(&mut self) -> Result<wire::Frame> {
        wire::read_frame(&mut self.reader)
    }

    /// Tells the peer why we are giving up; the peer may already be gone.
    fn abort<T>(&mut self, err: Error) -> Result<T> {
        let _ = self.send(&wire::error_frame(&err.to_string()));
        Err(err)
    }
}

/// Runs one side of a handshake. A confirmation mismatch is reported in
/// the outcome; malformed or unexpected frames are errors, after which an
/// `ERROR` frame is sent to the peer.
pub fn run_party<R: BufRead, W: Write>(
    role: Role,
    params: &PublicParams,
    seed: u64,
    reader: R,
    writer: W,
) -> Result<SessionOutcome> {
    let mut ch = Channel { reader, writer };
    let ours = Hello::of(params, &role.to_string());
    match role {
        Role::Alice => {
            let secret = keygen_alice(params, seed)?;
            let alice = alice_message(params, &secret)?;
            ch.send(&ours.encode())?;
            let peer = ch
                .recv()
                .and_then(|f| Hello::parse(&f))
                .and_then(|h| ours.check_peer(&h));
            if let Err(e) = peer {
                return ch.abort(e);
            }
            ch.send(&wire::encode_alice_pub(params, &alice))?;
            let bob = match ch.recv().and_then(|f| wire::decode_bob_pub(params, &f)) {
                Ok(b) => b,
                Err(e) => return ch.abort(e),
            };
            let key = alice_finish(params, &secret, &bob)?;
            let transcript = Transcript { alice, bob };
            let own_confirm = confirm(&key, params, &transcript);
            ch.send(&wire::confirm_frame(&own_confirm))?;
            let peer_confirm = ch.recv().and_then(|f| wire::parse_confirm(&f))?;
            Ok(SessionOutcome {
                key,
                transcript,
                own_confirm,
                peer_confirm,
            })
        }
        Role::Bob => {
            let secret = keygen_bob(params, seed)?;
            let bob = bob_message(params, &secret)?;
            let peer = ch
                .recv()
                .and_then(|f| Hello::parse(&f))
                .and_then(|h| ours.check_peer(&h));
            if let Err(e) = peer {
                return ch.abort(e);
            }
            ch.send(&ours.encode())?;
            let alice = match ch.recv().and_then(|f| wire::decode_alice_pub(params, &f)) {
                Ok(a) => a,
                Err(e) => return ch.abort(e),
            };
            ch.send(&wire::encode_bob_pub(params, &bob))?;
            let key = bob_finish(params, &secret, &alice)?;
            let transcript = Transcript { alice, bob };
            let own_confirm = confirm(&key, params, &transcript);
            let peer_confirm = match ch.recv().and_then(|f| wire::parse_confirm(&f)) {
                Ok(h) => h,
                Err(e) => return ch.abort(e),
            };
            ch.send(&wire::confirm_frame(&own_confirm))?;
            Ok(SessionOutcome {
                key,
                transcript,
                own_confirm,
                peer_confirm,
            })
        }
    }
}

/// [`run_party`] over a TCP connection with read and write timeouts.
pub fn run_tcp(
    role: Role,
    params: &PublicParams,
    seed: u64,
    stream: TcpStream,
    timeout: Duration,
) -> Result<SessionOutcome> {
    stream.set_read_timeout(Some(timeout))?;
    stream.set_write_timeout(Some(timeout))?;
    stream.set_nodelay(true)?;
    let reader = BufReader::new(stream.try_clone()?);
    run_party(role, params, seed, reader, stream)
}
