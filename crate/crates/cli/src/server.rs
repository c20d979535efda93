//! HTTP transport for [`ApiState`].

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::State;
use axum::http::{header, Method, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::Router;
use tokio::net::TcpListener;

use crate::api::{to_body, ApiState};

async fn dispatch(State(state): State<Arc<ApiState>>, method: Method, uri: Uri) -> Response {
    let (status, body) = if method == Method::GET {
        let r = state.handle(uri.path(), uri.query().unwrap_or(""));
        (r.status, r.body)
    } else {
        (405, to_body(&serde_json::json!({"code": "method_not_allowed", "message": "the API is read-only"})))
    };
    let status = StatusCode::from_u16(status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

pub fn router(state: Arc<ApiState>) -> Router {
    Router::new().fallback(dispatch).with_state(state)
}

/// Serve until the process is stopped. `ready` receives the bound address,
/// which matters when `addr` asks for port 0.
pub async fn serve(state: ApiState, addr: SocketAddr, ready: impl FnOnce(SocketAddr)) -> std::io::Result<()> {
    let listener = TcpListener::bind(addr).await?;
    ready(listener.local_addr()?);
    axum::serve(listener, router(Arc::new(state))).await
}
