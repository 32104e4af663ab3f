#![no_main]

use iabc::conditions::report::PartitionRecord;
use iabc::messaging::record::{decode_set, encode_set, MessageRecord};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = serde_json::from_slice::<Vec<MessageRecord>>(data) {
        if let Ok(set) = decode_set(&records) {
            assert_eq!(decode_set(&encode_set(&set)).expect("encoded set decodes"), set);
        }
    }
    if let Ok(record) = serde_json::from_slice::<PartitionRecord>(data) {
        if let Some(p) = record.to_partition() {
            assert_eq!(PartitionRecord::from(&p).to_partition(), Some(p));
        }
    }
});
