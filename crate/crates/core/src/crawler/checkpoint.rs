use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{CrawlState, Status};
use crate::error::{Error, Result};
use crate::graph::NodeTable;

const MAGIC: &str = "ernkit-crawl-checkpoint 1";

/// Writes `state` next to `path` and renames it into place.
pub(super) fn save(state: &CrawlState, path: &Path) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        writeln!(w, "{MAGIC}")?;
        writeln!(w, "levels {}", state.levels)?;
        writeln!(w, "cursor {}", state.cursor)?;
        writeln!(w, "nodes {}", state.nodes.len())?;
        for i in 0..state.nodes.len() {
            let s = match state.status[i] {
                Status::Pending => 'P',
                Status::Expanded => 'E',
                Status::Failed => 'F',
            };
            writeln!(w, "{}\t{}\t{s}", state.nodes.token(i), state.depth[i])?;
        }
        writeln!(w, "edges {}", state.edges.len())?;
        for &(u, v, level) in &state.edges {
            writeln!(w, "{u}\t{v}\t{level}")?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_line(&mut self) -> Result<String> {
        self.line += 1;
        match self.inner.next() {
            Some(l) => Ok(l?),
            None => Err(Error::parse(self.line, "checkpoint truncated")),
        }
    }

    fn header(&mut self, key: &str) -> Result<usize> {
        let l = self.next_line()?;
        l.strip_prefix(key)
            .and_then(|r| r.strip_prefix(' '))
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| Error::parse(self.line, format!("expected `{key} <n>`")))
    }

    fn fields<const N: usize>(&mut self) -> Result<[String; N]> {
        let l = self.next_line()?;
        let parts: Vec<String> = l.split('\t').map(str::to_owned).collect();
        parts
            .try_into()
            .map_err(|_| Error::parse(self.line, format!("expected {N} tab-separated fields")))
    }

    fn num<T: std::str::FromStr>(&self, s: &str) -> Result<T> {
        s.parse()
            .map_err(|_| Error::parse(self.line, format!("bad number `{s}`")))
    }
}

pub(super) fn load(path: &Path) -> Result<CrawlState> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut r = Lines {
        inner: reader.lines(),
        line: 0,
    };
    if r.next_line()? != MAGIC {
        return Err(Error::parse(1, "not a crawl checkpoint"));
    }
    let levels = r.header("levels")? as u32;
    let cursor = r.header("cursor")?;
    let n = r.header("nodes")?;
    let mut nodes = NodeTable::new();
    let mut depth = Vec::with_capacity(n);
    let mut status = Vec::with_capacity(n);
    for _ in 0..n {
        let [tok, d, s] = r.fields::<3>()?;
        if nodes.get(&tok).is_some() {
            return Err(Error::parse(r.line, format!("duplicate node `{tok}`")));
        }
        nodes.intern(&tok);
        depth.push(r.num(&d)?);
        status.push(match s.as_str() {
            "P" => Status::Pending,
            "E" => Status::Expanded,
            "F" => Status::Failed,
            _ => return Err(Error::parse(r.line, format!("bad status `{s}`"))),
        });
    }
    let m = r.header("edges")?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let [u, v, level] = r.fields::<3>()?;
        let (u, v): (usize, usize) = (r.num(&u)?, r.num(&v)?);
        if u >= n || v >= n {
            return Err(Error::parse(r.line, "edge endpoint out of range"));
        }
        edges.push((u, v, r.num(&level)?));
    }
    if cursor > n {
        return Err(Error::Consistency("checkpoint cursor past the node list".into()));
    }
    Ok(CrawlState::restore(levels, nodes, depth, status, edges, cursor))
}
