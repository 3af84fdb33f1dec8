use proptest::prelude::*;
use rundung::csv_io::{self, ColumnMap};
use rundung_core::{CommentRecord, Label};

fn record() -> impl Strategy<Value = CommentRecord> {
    (
        any::<u32>(),
        "[a-z0-9_]{1,12}",
        "[^\\u{0}\\r\\n]{1,40}",
        any::<bool>(),
        "20[0-9]{2}-0[1-9]-[0-2][1-9]",
        "[a-z_]{1,10}",
    )
        .prop_filter("non-blank text", |t| !t.2.trim().is_empty())
        .prop_map(|(index, handle, text, bully, date, target)| CommentRecord {
            index: index as u64,
            commenter_handle: handle,
            text: text.trim().to_string(),
            label: if bully { Label::Bullying } else { Label::NonBullying },
            posted_date: date,
            target_handle: target,
        })
}

proptest! {
    #[test]
    fn write_then_read_is_identity(records in prop::collection::vec(record(), 0..20), comma in any::<bool>()) {
        let delimiter = if comma { b',' } else { b';' };
        let mut buf = Vec::new();
        csv_io::write_corpus(&mut buf, &records, delimiter, &ColumnMap::default()).unwrap();
        let rows = csv_io::read_raw(buf.as_slice(), delimiter, &ColumnMap::default()).unwrap();
        let back = csv_io::parse_records(&rows).unwrap();
        prop_assert_eq!(back, records);
    }
}
