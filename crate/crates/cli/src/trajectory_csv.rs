//! Trajectory CSV: `iter,t_s,x_m,y_m,event,dir_deg`, fixed 9-decimal floats.

use std::io::{Read, Write};

use nspmr::{CompassAngle, Point2, Trajectory, Waypoint, WaypointEvent};

pub const HEADER: [&str; 6] = ["iter", "t_s", "x_m", "y_m", "event", "dir_deg"];

#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("row {row}: {message}")]
    Field { row: usize, message: String },
}

fn fixed(v: f64) -> String {
    format!("{v:.9}")
}

pub fn write_trajectory<W: Write>(t: &Trajectory, out: W) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for (i, wp) in t.waypoints.iter().enumerate() {
        w.write_record([
            i.to_string(),
            fixed(wp.time),
            fixed(wp.pos.x),
            fixed(wp.pos.y),
            wp.event.as_str().to_string(),
            wp.heading.map(|h| fixed(h.degrees())).unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn trajectory_to_string(t: &Trajectory) -> String {
    let mut buf = Vec::new();
    write_trajectory(t, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}

/// Reads waypoints back; `dt` is taken from the second row's timestamp.
pub fn read_trajectory<R: Read>(input: R) -> Result<Trajectory, CsvError> {
    let mut r = csv::Reader::from_reader(input);
    let mut waypoints = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad = |message: String| CsvError::Field { row: row + 1, message };
        let num = |i: usize| {
            rec.get(i)
                .unwrap_or("")
                .parse::<f64>()
                .map_err(|e| bad(format!("column {}: {e}", HEADER[i])))
        };
        let event = rec.get(4).unwrap_or("");
        let event = WaypointEvent::parse(event).ok_or_else(|| bad(format!("unknown event `{event}`")))?;
        let heading = match rec.get(5).unwrap_or("") {
            "" => None,
            _ => Some(CompassAngle::new(num(5)?)),
        };
        waypoints.push(Waypoint {
            pos: Point2::new(num(2)?, num(3)?),
            time: num(1)?,
            event,
            heading,
        });
    }
    let dt = waypoints.get(1).map_or(0.0, |w| w.time);
    Ok(Trajectory { dt, waypoints })
}
