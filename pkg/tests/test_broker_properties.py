from hypothesis import given, settings

from broker_model import check_interleaving, operations


@settings(max_examples=300)
@given(operations)
def test_random_interleavings_keep_at_least_once(ops):
    check_interleaving(ops)


def test_expired_delivery_cannot_be_acked_late():
    check_interleaving([("publish", 0), ("consume", 0), ("advance", 1000), ("consume", 0), ("ack", 0), ("ack", 0)])
