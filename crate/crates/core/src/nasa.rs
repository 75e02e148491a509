//! Optional client for the NASA POWER monthly climatology endpoint.
//!
//! Strictly opt-in: every call must pass `allow_network = true`, and the
//! base URL can be pointed at a local stub for testing.

use crate::error::{Error, Result};
use crate::float::Float;
use crate::series::MONTHS_PER_YEAR;

pub const DEFAULT_BASE_URL: &str = "https://power.larc.nasa.gov";

/// Environment variable that overrides the service base URL.
pub const BASE_URL_ENV: &str = "MGSIM_NASA_BASE_URL";

const GHI_PARAM: &str = "ALLSKY_SFC_SW_DWN";
const WIND_PARAM: &str = "WS10M";
const TEMP_PARAM: &str = "T2M";
const YEAR: u32 = 2020;

/// Monthly climate normals for one site.
#[derive(Debug, Clone)]
pub struct MonthlyClimate<T> {
    /// Irradiation [kWh/m2/day].
    pub ghi_kwh_m2_day: [T; MONTHS_PER_YEAR],
    /// Wind speed at 10 m [m/s].
    pub wind_ms: [T; MONTHS_PER_YEAR],
    /// Air temperature at 2 m [C].
    pub temperature_c: [T; MONTHS_PER_YEAR],
}

pub struct NasaPowerClient {
    base_url: String,
}

impl NasaPowerClient {
    pub fn new(base_url: impl Into<String>) -> Self {
        Self { base_url: base_url.into() }
    }

    /// Resolves the base URL from the environment override or the default.
    pub fn from_env() -> Self {
        let base = std::env::var(BASE_URL_ENV).unwrap_or_else(|_| DEFAULT_BASE_URL.to_string());
        Self::new(base)
    }

    /// Fetches monthly irradiance, wind speed, and temperature for a site.
    /// Refuses to touch the network unless `allow_network` is set.
    pub fn fetch_monthly<T: Float>(
        &self,
        latitude: f64,
        longitude: f64,
        allow_network: bool,
    ) -> Result<MonthlyClimate<T>> {
        if !allow_network {
            return Err(Error::OfflineMode);
        }
        if !(-90.0..=90.0).contains(&latitude) {
            return Err(Error::OutOfRange { context: "latitude", value: latitude, min: -90.0, max: 90.0 });
        }
        if !(-180.0..=180.0).contains(&longitude) {
            return Err(Error::OutOfRange { context: "longitude", value: longitude, min: -180.0, max: 180.0 });
        }

        let url = format!(
            "{}/api/temporal/monthly/point?parameters={GHI_PARAM},{WIND_PARAM},{TEMP_PARAM}\
             &community=RE&latitude={latitude}&longitude={longitude}&start={YEAR}&end={YEAR}&format=JSON",
            self.base_url.trim_end_matches('/'),
        );
        let client = reqwest::blocking::Client::builder()
            .timeout(std::time::Duration::from_secs(30))
            .build()
            .map_err(|e| Error::HttpTransport(e.to_string()))?;
        let response = client.get(&url).send().map_err(|e| Error::HttpTransport(e.to_string()))?;
        if !response.status().is_success() {
            return Err(Error::HttpStatus(response.status().as_u16()));
        }
        let body: serde_json::Value =
            response.json().map_err(|e| Error::HttpTransport(e.to_string()))?;
        parse_power_response(&body)
    }
}

/// Extracts the three parameter blocks from a POWER monthly JSON body.
pub fn parse_power_response<T: Float>(body: &serde_json::Value) -> Result<MonthlyClimate<T>> {
    let parameters = body
        .get("properties")
        .and_then(|p| p.get("parameter"))
        .ok_or_else(|| Error::MissingField("properties.parameter".into()))?;
    Ok(MonthlyClimate {
        ghi_kwh_m2_day: extract_months(parameters, GHI_PARAM)?,
        wind_ms: extract_months(parameters, WIND_PARAM)?,
        temperature_c: extract_months(parameters, TEMP_PARAM)?,
    })
}

fn extract_months<T: Float>(parameters: &serde_json::Value, name: &str) -> Result<[T; MONTHS_PER_YEAR]> {
    let block = parameters
        .get(name)
        .and_then(|v| v.as_object())
        .ok_or_else(|| Error::MissingField(name.to_string()))?;
    let mut out = [T::zero(); MONTHS_PER_YEAR];
    for (m, slot) in out.iter_mut().enumerate() {
        let key = format!("{YEAR}{:02}", m + 1);
        let value = block
            .get(&key)
            .and_then(|v| v.as_f64())
            .ok_or_else(|| Error::MissingField(format!("{name}.{key}")))?;
        *slot = T::of(value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::{Read, Write};
    use std::net::TcpListener;

    fn power_json() -> String {
        let month_block = |base: f64| -> String {
            let months: Vec<String> = (1..=12)
                .map(|m| format!("\"{YEAR}{m:02}\": {}", base + m as f64 * 0.1))
                .collect();
            format!("{{ {}, \"{YEAR}13\": 0.0 }}", months.join(", "))
        };
        format!(
            "{{\"properties\": {{\"parameter\": {{\
             \"ALLSKY_SFC_SW_DWN\": {},\
             \"WS10M\": {},\
             \"T2M\": {}}}}}}}",
            month_block(3.0),
            month_block(5.0),
            month_block(20.0)
        )
    }

    /// Single-request HTTP stub on an ephemeral port.
    fn serve_once(body: String, status_line: &'static str) -> String {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        std::thread::spawn(move || {
            if let Ok((mut stream, _)) = listener.accept() {
                let mut buf = [0u8; 4096];
                let _ = stream.read(&mut buf);
                let response = format!(
                    "{status_line}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{}",
                    body.len(),
                    body
                );
                let _ = stream.write_all(response.as_bytes());
            }
        });
        format!("http://{addr}")
    }

    #[test]
    fn offline_mode_refuses_without_touching_network() {
        let client = NasaPowerClient::new("http://127.0.0.1:1");
        match client.fetch_monthly::<f64>(26.3508, 50.2123, false) {
            Err(Error::OfflineMode) => {}
            other => panic!("expected offline error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_coordinates() {
        let client = NasaPowerClient::new("http://127.0.0.1:1");
        assert!(matches!(
            client.fetch_monthly::<f64>(95.0, 0.0, true),
            Err(Error::OutOfRange { context: "latitude", .. })
        ));
    }

    #[test]
    fn fetches_and_parses_stubbed_response() {
        let base = serve_once(power_json(), "HTTP/1.1 200 OK");
        let client = NasaPowerClient::new(base);
        let climate = client.fetch_monthly::<f64>(26.3508, 50.2123, true).unwrap();
        assert!((climate.ghi_kwh_m2_day[0] - 3.1).abs() < 1e-9);
        assert!((climate.wind_ms[11] - 6.2).abs() < 1e-9);
        assert!((climate.temperature_c[5] - 20.6).abs() < 1e-9);
    }

    #[test]
    fn surfaces_http_status() {
        let base = serve_once("{}".to_string(), "HTTP/1.1 503 Service Unavailable");
        let client = NasaPowerClient::new(base);
        assert!(matches!(
            client.fetch_monthly::<f64>(0.0, 0.0, true),
            Err(Error::HttpStatus(503))
        ));
    }

    #[test]
    fn missing_field_is_named() {
        let body: serde_json::Value =
            serde_json::from_str("{\"properties\": {\"parameter\": {\"WS10M\": {}}}}").unwrap();
        match parse_power_response::<f64>(&body) {
            Err(Error::MissingField(f)) => assert_eq!(f, "ALLSKY_SFC_SW_DWN"),
            other => panic!("expected missing field, got {other:?}"),
        }
    }
}
