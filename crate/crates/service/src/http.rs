//! HTTP surface over a [`CatalogStore`].

use std::collections::HashMap;
use std::sync::Arc;

use affekt_core::classify::{RecommendError, RecommendationKind, Story, StoryError};
use affekt_core::text::{ItemRecord, TextError};
use affekt_core::{build_wheel, WheelCatalog};
use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};

use crate::store::{CatalogStore, StoreError, WriteOutcome};
use crate::views::{ErrorBody, ItemEmotions, StoryDetail, StoryEmotions, StorySummary};

pub const DEFAULT_LIMIT: usize = 5;

pub struct AppState {
    pub store: CatalogStore,
    pub wheel: WheelCatalog,
}

impl AppState {
    pub fn new(store: CatalogStore) -> Arc<AppState> {
        Arc::new(AppState {
            store,
            wheel: build_wheel(),
        })
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                error: message.into(),
                field: None,
            },
        }
    }

    fn field(mut self, field: &str) -> Self {
        self.body.field = Some(field.to_string());
        self
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<StoryError> for ApiError {
    fn from(e: StoryError) -> Self {
        let status = match e {
            StoryError::UnknownItem(_) => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::BAD_REQUEST,
        };
        let err = ApiError::new(status, e.to_string());
        match e {
            StoryError::EmptyField(f) => err.field(f),
            StoryError::Bounds { .. } => err.field("items"),
            StoryError::UnknownItem(_) | StoryError::RepeatedItem(_) => err.field("itemId"),
            _ => err,
        }
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Item(TextError::EmptyProfile(_)) => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string())
            }
            StoreError::Item(TextError::Schema { field, ref message }) => {
                ApiError::new(StatusCode::BAD_REQUEST, message.clone()).field(field)
            }
            StoreError::Item(_) => ApiError::new(StatusCode::BAD_REQUEST, e.to_string()),
            StoreError::Story(s) => s.into(),
            StoreError::Conflict { .. } => ApiError::new(StatusCode::CONFLICT, e.to_string()).field("id"),
            StoreError::NoPrototypes => ApiError::new(StatusCode::SERVICE_UNAVAILABLE, e.to_string()),
            StoreError::Io { .. }
            | StoreError::Corrupt { .. }
            | StoreError::Locked(_)
            | StoreError::ReadOnly => {
                tracing::error!(error = %e, "store failure");
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string())
            }
        }
    }
}

impl From<RecommendError> for ApiError {
    fn from(e: RecommendError) -> Self {
        match e {
            RecommendError::UnknownStory(_) => ApiError::new(StatusCode::NOT_FOUND, e.to_string()),
            RecommendError::EmptyProfile(_) => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string())
            }
            RecommendError::UnknownKind(_) => ApiError::new(StatusCode::BAD_REQUEST, e.to_string()).field("kind"),
            RecommendError::InvalidLimit => ApiError::new(StatusCode::BAD_REQUEST, e.to_string()).field("limit"),
        }
    }
}

fn written(outcome: WriteOutcome) -> StatusCode {
    match outcome {
        WriteOutcome::Created => StatusCode::CREATED,
        WriteOutcome::Unchanged => StatusCode::OK,
    }
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, StoreError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
        .map_err(ApiError::from)
}

async fn post_item(State(app): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let value: serde_json::Value = serde_json::from_slice(&body)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, format!("malformed JSON: {e}")))?;
    let record = ItemRecord::from_value(&value).map_err(|e| ApiError::from(StoreError::Item(e)))?;
    let (outcome, item) = blocking(move || app.store.put_item(record)).await?;
    Ok((written(outcome), Json(ItemEmotions::of(&item))).into_response())
}

async fn post_story(State(app): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let text = std::str::from_utf8(&body)
        .map_err(|_| ApiError::new(StatusCode::BAD_REQUEST, "body is not UTF-8"))?;
    let story = Story::parse(text)?;
    let (outcome, story) = blocking(move || app.store.put_story(story)).await?;
    Ok((written(outcome), Json(StoryEmotions::of(&story))).into_response())
}

async fn list_items(State(app): State<Arc<AppState>>) -> Json<Vec<String>> {
    Json(app.store.snapshot().items.keys().cloned().collect())
}

async fn item_emotions(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<ItemEmotions>, ApiError> {
    let snapshot = app.store.snapshot();
    let item = snapshot
        .item(&id)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("unknown item `{id}`")))?;
    Ok(Json(ItemEmotions::of(item)))
}

async fn list_stories(
    State(app): State<Arc<AppState>>,
    Query(query): Query<HashMap<String, String>>,
) -> Json<Vec<StorySummary>> {
    let snapshot = app.store.snapshot();
    let stories = match query.get("item") {
        Some(item) => snapshot.stories_with_item(item).map(StorySummary::of).collect(),
        None => snapshot.stories.values().map(|s| StorySummary::of(s)).collect(),
    };
    Json(stories)
}

async fn get_story(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<StoryDetail>, ApiError> {
    let snapshot = app.store.snapshot();
    let story = snapshot
        .story(&id)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("unknown story `{id}`")))?;
    Ok(Json(StoryDetail::of(story)))
}

async fn recommendations(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(query): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    let kind: RecommendationKind = query
        .get("kind")
        .ok_or_else(|| ApiError::new(StatusCode::BAD_REQUEST, "missing query parameter `kind`").field("kind"))?
        .parse()?;
    let limit = match query.get("limit") {
        None => DEFAULT_LIMIT,
        Some(raw) => raw.parse().map_err(|_| {
            ApiError::new(StatusCode::BAD_REQUEST, format!("limit must be a positive integer (got {raw:?})"))
                .field("limit")
        })?,
    };
    let recommendation = app.store.snapshot().recommend(&app.wheel, &id, kind, limit)?;
    Ok(Json(recommendation).into_response())
}

async fn emotions(State(app): State<Arc<AppState>>) -> Json<serde_json::Value> {
    Json(app.wheel.to_document())
}

async fn triples(State(app): State<Arc<AppState>>) -> Response {
    (
        [(header::CONTENT_TYPE, "application/n-triples; charset=utf-8")],
        app.store.snapshot().triples(),
    )
        .into_response()
}

async fn health(State(app): State<Arc<AppState>>) -> Json<serde_json::Value> {
    Json(serde_json::json!({ "revision": app.store.snapshot().revision }))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/items", post(post_item).get(list_items))
        .route("/items/{id}/emotions", get(item_emotions))
        .route("/stories", post(post_story).get(list_stories))
        .route("/stories/{id}", get(get_story))
        .route("/stories/{id}/recommendations", get(recommendations))
        .route("/emotions", get(emotions))
        .route("/triples", get(triples))
        .route("/health", get(health))
        .with_state(state)
}
