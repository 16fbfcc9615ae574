use std::io::{Read, Write};
use std::net::TcpStream;
use std::process::{Child, Command, Stdio};
use std::time::{Duration, Instant};

use semsnap_testkit::fixture_path;

struct Server(Child);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

fn free_port() -> u16 {
    std::net::TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port()
}

/// One request over a fresh connection; returns status and JSON body.
fn request(port: u16, method: &str, path: &str) -> (u16, serde_json::Value) {
    let mut stream = TcpStream::connect(("127.0.0.1", port)).unwrap();
    write!(
        stream,
        "{method} {path} HTTP/1.1\r\nHost: localhost\r\nContent-Length: 0\r\nConnection: close\r\n\r\n"
    )
    .unwrap();
    let mut raw = String::new();
    stream.read_to_string(&mut raw).unwrap();
    let (head, body) = raw.split_once("\r\n\r\n").unwrap();
    let status = head.split_whitespace().nth(1).unwrap().parse().unwrap();
    // responses are small, but may still arrive chunked
    let body = if head.to_ascii_lowercase().contains("transfer-encoding: chunked") {
        let mut out = String::new();
        let mut rest = body;
        while let Some((size, tail)) = rest.split_once("\r\n") {
            let n = usize::from_str_radix(size.trim(), 16).unwrap();
            if n == 0 {
                break;
            }
            out.push_str(&tail[..n]);
            rest = &tail[n + 2..];
        }
        out
    } else {
        body.to_string()
    };
    (status, serde_json::from_str(&body).unwrap())
}

fn start(name: &str) -> (Server, u16) {
    let port = free_port();
    let child = Command::new(env!("CARGO_BIN_EXE_semsnap"))
        .args([
            "--quiet",
            "serve",
            fixture_path(&format!("{name}.canvas.json")).to_str().unwrap(),
        ])
        .args(["--port", &port.to_string()])
        .stdout(Stdio::null())
        .spawn()
        .unwrap();
    let server = Server(child);
    let deadline = Instant::now() + Duration::from_secs(10);
    while TcpStream::connect(("127.0.0.1", port)).is_err() {
        assert!(Instant::now() < deadline, "server did not come up");
        std::thread::sleep(Duration::from_millis(20));
    }
    (server, port)
}

#[test]
fn served_differentiate_drops_the_confuser() {
    let (_server, port) = start("election");
    let (status, doc) = request(port, "GET", "/api/canvas");
    assert_eq!(status, 200);
    assert_eq!(doc["views"].as_array().unwrap().len(), 3);

    let (_, menu) = request(port, "GET", "/api/views/trump/operations");
    let id = menu["categories"]["differentiate"][0]["id"]
        .as_str()
        .unwrap()
        .to_string();
    let (status, preview) = request(port, "POST", &format!("/api/operations/{id}/apply"));
    assert_eq!(status, 200, "{preview}");
    let (status, _) = request(port, "POST", "/api/history/keep");
    assert_eq!(status, 200);

    let (_, relations) = request(port, "GET", "/api/relations");
    let codes: Vec<&str> = relations["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["code"].as_str().unwrap())
        .collect();
    assert!(!codes.contains(&"R5"), "{codes:?}");
    assert!(codes.contains(&"R3a"));
}
