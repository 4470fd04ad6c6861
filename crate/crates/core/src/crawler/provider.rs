use std::io::{self, BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream, ToSocketAddrs};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use log::{debug, warn};

use crate::error::ProviderError;
use crate::graph::{validate_token, GraphView, UndirectedGraph};

/// Source of friend lists.
///
/// Lists must be deterministic for a given provider state, free of
/// duplicates and never contain the queried token.
pub trait FriendProvider: Sync {
    fn friends(&self, token: &str) -> Result<Vec<String>, ProviderError>;
}

/// Friend lists read from a stored social graph.
#[derive(Debug, Clone)]
pub struct GraphProvider {
    graph: UndirectedGraph,
}

impl GraphProvider {
    pub fn new(graph: UndirectedGraph) -> Self {
        GraphProvider { graph }
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }
}

impl FriendProvider for GraphProvider {
    fn friends(&self, token: &str) -> Result<Vec<String>, ProviderError> {
        let u = self.graph.nodes().get(token).ok_or(ProviderError::NotFound)?;
        Ok(self
            .graph
            .neighbors(u)
            .iter()
            .map(|&v| self.graph.nodes().token(v).to_owned())
            .collect())
    }
}

impl<P: FriendProvider + Send + ?Sized> FriendProvider for Arc<P> {
    fn friends(&self, token: &str) -> Result<Vec<String>, ProviderError> {
        (**self).friends(token)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RemoteOptions {
    pub timeout: Duration,
    /// Extra attempts after an i/o failure.
    pub retries: u32,
    /// Fixed pause before every request.
    pub delay: Duration,
}

impl Default for RemoteOptions {
    fn default() -> Self {
        RemoteOptions {
            timeout: Duration::from_secs(10),
            retries: 2,
            delay: Duration::ZERO,
        }
    }
}

/// Client for the `FRIENDS <token>` line protocol.
///
/// Replies are `OK <n>` followed by `n` token lines, or `ERR NOTFOUND`.
/// Idle connections are pooled so concurrent crawls reuse sockets.
pub struct RemoteProvider {
    addr: String,
    options: RemoteOptions,
    pool: Mutex<Vec<BufReader<TcpStream>>>,
}

impl RemoteProvider {
    pub fn new(addr: impl Into<String>, options: RemoteOptions) -> Self {
        RemoteProvider {
            addr: addr.into(),
            options,
            pool: Mutex::new(Vec::new()),
        }
    }

    fn connect(&self) -> io::Result<BufReader<TcpStream>> {
        let mut last = io::Error::new(io::ErrorKind::NotFound, format!("no address for {}", self.addr));
        for sa in self.addr.to_socket_addrs()? {
            match TcpStream::connect_timeout(&sa, self.options.timeout) {
                Ok(s) => {
                    s.set_read_timeout(Some(self.options.timeout))?;
                    s.set_write_timeout(Some(self.options.timeout))?;
                    s.set_nodelay(true)?;
                    return Ok(BufReader::new(s));
                }
                Err(e) => last = e,
            }
        }
        Err(last)
    }

    fn request(&self, conn: &mut BufReader<TcpStream>, token: &str) -> Result<Vec<String>, ProviderError> {
        writeln!(conn.get_mut(), "FRIENDS {token}")?;
        conn.get_mut().flush()?;
        let header = read_line(conn)?;
        if header == "ERR NOTFOUND" {
            return Err(ProviderError::NotFound);
        }
        let n: usize = header
            .strip_prefix("OK ")
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| ProviderError::Protocol(format!("unexpected reply `{header}`")))?;
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let t = read_line(conn)?;
            validate_token(&t).map_err(|e| ProviderError::Protocol(e.to_string()))?;
            out.push(t);
        }
        Ok(out)
    }
}

fn read_line<R: BufRead>(r: &mut R) -> Result<String, ProviderError> {
    let mut line = String::new();
    if r.read_line(&mut line)? == 0 {
        return Err(ProviderError::Io(io::Error::new(
            io::ErrorKind::UnexpectedEof,
            "connection closed",
        )));
    }
    Ok(line.trim_end_matches(['\r', '\n']).to_owned())
}

impl FriendProvider for RemoteProvider {
    fn friends(&self, token: &str) -> Result<Vec<String>, ProviderError> {
        let mut attempt = 0;
        loop {
            if !self.options.delay.is_zero() {
                thread::sleep(self.options.delay);
            }
            let pooled = self.pool.lock().expect("pool lock").pop();
            let result = match pooled.map_or_else(|| self.connect(), Ok) {
                Ok(mut conn) => {
                    let r = self.request(&mut conn, token);
                    if matches!(r, Ok(_) | Err(ProviderError::NotFound)) {
                        self.pool.lock().expect("pool lock").push(conn);
                    }
                    r
                }
                Err(e) => Err(ProviderError::Io(e)),
            };
            match result {
                Err(ProviderError::Io(e)) if attempt < self.options.retries => {
                    attempt += 1;
                    debug!("retrying `{token}` after i/o error: {e}");
                }
                r => return r,
            }
        }
    }
}

/// Answers the friend protocol from `provider` on every accepted connection,
/// one thread per connection. Returns when the listener fails.
pub fn serve_friends<P>(listener: TcpListener, provider: Arc<P>) -> io::Result<()>
where
    P: FriendProvider + Send + 'static,
{
    for stream in listener.incoming() {
        let stream = stream?;
        let provider = Arc::clone(&provider);
        thread::spawn(move || {
            if let Err(e) = handle_connection(stream, provider.as_ref()) {
                debug!("connection closed: {e}");
            }
        });
    }
    Ok(())
}

fn handle_connection<P: FriendProvider + ?Sized>(stream: TcpStream, provider: &P) -> io::Result<()> {
    let mut out = stream.try_clone()?;
    let reader = BufReader::new(stream);
    for line in reader.lines() {
        let line = line?;
        let Some(token) = line.trim_end().strip_prefix("FRIENDS ") else {
            warn!("bad request `{line}`");
            writeln!(out, "ERR BADREQUEST")?;
            continue;
        };
        match provider.friends(token) {
            Ok(list) => {
                let mut reply = format!("OK {}\n", list.len());
                for f in list {
                    reply.push_str(&f);
                    reply.push('\n');
                }
                out.write_all(reply.as_bytes())?;
            }
            Err(_) => writeln!(out, "ERR NOTFOUND")?,
        }
        out.flush()?;
    }
    Ok(())
}
