//! Concurrent batch generation with a bounded in-flight window.
//!
//! Responses come back in request order regardless of completion order, and
//! one failing request never disturbs its neighbors: failures are ordinary
//! error responses in the output vector.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use orforge_core::gen::{GenRequest, GenResponse, TextGenerator};

/// Runs every request through the client with at most `max_in_flight`
/// concurrent calls. The output has one response per request, index-aligned.
pub fn generate_batch(
    client: &dyn TextGenerator,
    requests: &[GenRequest],
    max_in_flight: usize,
) -> Vec<GenResponse> {
    assert!(max_in_flight >= 1, "max_in_flight must be at least 1");
    if requests.is_empty() {
        return Vec::new();
    }
    let slots: Vec<Mutex<Option<GenResponse>>> =
        requests.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = max_in_flight.min(requests.len());
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let index = next.fetch_add(1, Ordering::Relaxed);
                if index >= requests.len() {
                    break;
                }
                let response = client.generate(&requests[index]);
                *slots[index].lock().unwrap() = Some(response);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| {
            slot.into_inner()
                .unwrap()
                .expect("every request index was claimed by a worker")
        })
        .collect()
}
