#!/usr/bin/env python3
"""Regenerates the binary test fixtures under tests/data/ and the bundled
zoo manifest under data/.

The serialized models are written by this standalone encoder (field tags,
varints and length prefixes assembled by hand), so the C++ decoder is tested
against an implementation it shares nothing with. Output is deterministic:
a fixed RNG seed drives every payload, and regenerating produces identical
bytes, so the digests pinned in data/zoo_manifest.json stay valid.

Usage: python3 tools/make_fixtures.py [repo_root]
"""

from __future__ import annotations

import hashlib
import json
import random
import struct
import sys
from pathlib import Path

# --- wire encoding -----------------------------------------------------------


def varint(value: int) -> bytes:
    if value < 0:
        raise ValueError("negative varint")
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def tag(field: int, wire: int) -> bytes:
    return varint((field << 3) | wire)


def field_varint(field: int, value: int) -> bytes:
    return tag(field, 0) + varint(value)


def field_bytes(field: int, payload: bytes) -> bytes:
    return tag(field, 2) + varint(len(payload)) + payload


def field_str(field: int, text: str) -> bytes:
    return field_bytes(field, text.encode("utf-8"))


# --- model assembly ----------------------------------------------------------

FLOAT = 1  # TensorProto.DataType

rng = random.Random(0x5EED)


def tensor(
    name: str,
    dims: list[int],
    dtype: int = FLOAT,
    packed_dims: bool = True,
    payload: str = "raw",
) -> bytes:
    """TensorProto: dims(1), data_type(2), float_data(4), name(8), raw_data(9)."""
    out = b""
    if packed_dims:
        out += field_bytes(1, b"".join(varint(d) for d in dims))
    else:
        out += b"".join(field_varint(1, d) for d in dims)
    out += field_varint(2, dtype)
    count = 1
    for d in dims:
        count *= d
    if payload == "float_data":
        values = [rng.uniform(-1.0, 1.0) for _ in range(count)]
        out += field_bytes(4, struct.pack(f"<{count}f", *values))
        out += field_str(8, name)
    elif payload == "raw" and count <= 4096 and dtype == FLOAT:
        # keep fixtures small: only modest tensors carry trained values
        values = [rng.uniform(-1.0, 1.0) for _ in range(count)]
        out += field_str(8, name)
        out += field_bytes(9, struct.pack(f"<{count}f", *values))
    else:
        out += field_str(8, name)
    return out


def node(op_type: str, name: str, inputs: list[str], outputs: list[str]) -> bytes:
    """NodeProto: input(1), output(2), name(3), op_type(4)."""
    out = b"".join(field_str(1, i) for i in inputs)
    out += b"".join(field_str(2, o) for o in outputs)
    out += field_str(3, name)
    out += field_str(4, op_type)
    return out


def value_info(name: str, dtype: int = FLOAT) -> bytes:
    """ValueInfoProto: name(1), type(2) with a minimal TypeProto.tensor_type."""
    tensor_type = field_varint(1, dtype)  # elem_type
    return field_str(1, name) + field_bytes(2, field_bytes(1, tensor_type))


def graph(
    name: str,
    initializers: list[bytes],
    nodes: list[bytes],
    inputs: list[str],
    outputs: list[str],
) -> bytes:
    """GraphProto: node(1), name(2), initializer(5), input(11), output(12)."""
    out = b"".join(field_bytes(1, n) for n in nodes)
    out += field_str(2, name)
    out += b"".join(field_bytes(5, t) for t in initializers)
    out += b"".join(field_bytes(11, value_info(i)) for i in inputs)
    out += b"".join(field_bytes(12, value_info(o)) for o in outputs)
    return out


def model(graph_bytes: bytes, producer: str, opset: int, ir_version: int = 3) -> bytes:
    """ModelProto: ir_version(1), producer_name(2), producer_version(3),
    model_version(5), graph(7), opset_import(8)."""
    out = field_varint(1, ir_version)
    out += field_str(2, producer)
    out += field_str(3, "1.0")
    out += field_varint(5, 1)
    out += field_bytes(7, graph_bytes)
    out += field_bytes(8, field_str(1, "") + field_varint(2, opset))
    return out


# --- network definitions -----------------------------------------------------


def vgg(name: str, conv_channels: list[tuple[int, int]]) -> bytes:
    """Gluon-exported VGG: vgg0_convN_weight/bias, vgg0_denseN_weight/bias."""
    initializers: list[bytes] = []
    nodes: list[bytes] = []
    prev = "data"
    for i, (out_ch, in_ch) in enumerate(conv_channels):
        w = f"vgg0_conv{i}_weight"
        b = f"vgg0_conv{i}_bias"
        out_name = f"vgg0_conv{i}_fwd"
        initializers.append(tensor(w, [out_ch, in_ch, 3, 3]))
        initializers.append(tensor(b, [out_ch]))
        nodes.append(node("Conv", f"vgg0_conv{i}", [prev, w, b], [out_name]))
        nodes.append(node("Relu", f"vgg0_relu{i}", [out_name], [f"vgg0_relu{i}_fwd"]))
        prev = f"vgg0_relu{i}_fwd"
    dense_shapes = [(4096, 25088), (4096, 4096), (1000, 4096)]
    for i, (out_f, in_f) in enumerate(dense_shapes):
        w = f"vgg0_dense{i}_weight"
        b = f"vgg0_dense{i}_bias"
        out_name = f"vgg0_dense{i}_fwd"
        initializers.append(tensor(w, [out_f, in_f]))
        initializers.append(tensor(b, [out_f]))
        nodes.append(node("Gemm", f"vgg0_dense{i}", [prev, w, b], [out_name]))
        prev = out_name
    g = graph(name, initializers, nodes, ["data"], [prev])
    return model(g, "mxnet", opset=7)


def vgg16() -> bytes:
    channels = [
        (64, 3), (64, 64),
        (128, 64), (128, 128),
        (256, 128), (256, 256), (256, 256),
        (512, 256), (512, 512), (512, 512),
        (512, 512), (512, 512), (512, 512),
    ]
    return vgg("vgg16", channels)


def vgg19() -> bytes:
    channels = [
        (64, 3), (64, 64),
        (128, 64), (128, 128),
        (256, 128), (256, 256), (256, 256), (256, 256),
        (512, 256), (512, 512), (512, 512), (512, 512),
        (512, 512), (512, 512), (512, 512), (512, 512),
    ]
    return vgg("vgg19", channels)


# ResNet50 v2 bottleneck conv shapes per stage, in gluon export order:
# each stage opens with (reduce, 3x3, expand, downsample), the remaining
# blocks are (reduce, 3x3, expand). Shapes are (out, in, k, k).
def resnet50_stage(in_ch: int, mid_ch: int, out_ch: int, blocks: int) -> list[list[int]]:
    shapes = [
        [mid_ch, in_ch, 1, 1],
        [mid_ch, mid_ch, 3, 3],
        [out_ch, mid_ch, 1, 1],
        [out_ch, in_ch, 1, 1],  # downsample projection
    ]
    for _ in range(blocks - 1):
        shapes += [
            [mid_ch, out_ch, 1, 1],
            [mid_ch, mid_ch, 3, 3],
            [out_ch, mid_ch, 1, 1],
        ]
    return shapes


def resnet50() -> bytes:
    initializers: list[bytes] = []
    nodes: list[bytes] = []
    # stem: batchnorm on data, then 7x7 conv (v2 preactivation style)
    initializers.append(tensor("resnetv24_batchnorm0_gamma", [3]))
    initializers.append(tensor("resnetv24_batchnorm0_beta", [3]))
    initializers.append(tensor("resnetv24_conv0_weight", [64, 3, 7, 7]))
    nodes.append(
        node("BatchNormalization", "resnetv24_batchnorm0",
             ["data", "resnetv24_batchnorm0_gamma", "resnetv24_batchnorm0_beta"],
             ["resnetv24_batchnorm0_fwd"])
    )
    nodes.append(
        node("Conv", "resnetv24_conv0",
             ["resnetv24_batchnorm0_fwd", "resnetv24_conv0_weight"],
             ["resnetv24_conv0_fwd"])
    )
    prev = "resnetv24_conv0_fwd"
    stages = [
        resnet50_stage(64, 64, 256, 3),
        resnet50_stage(256, 128, 512, 4),
        resnet50_stage(512, 256, 1024, 6),
        resnet50_stage(1024, 512, 2048, 3),
    ]
    for s, shapes in enumerate(stages, start=1):
        for k, dims in enumerate(shapes):
            w = f"resnetv24_stage{s}_conv{k}_weight"
            out_name = f"resnetv24_stage{s}_conv{k}_fwd"
            # v2 blocks carry a batchnorm before each conv; rank-1, filtered out
            gamma = f"resnetv24_stage{s}_batchnorm{k}_gamma"
            initializers.append(tensor(gamma, [dims[1]]))
            initializers.append(tensor(w, dims))
            nodes.append(node("Conv", f"resnetv24_stage{s}_conv{k}", [prev, w], [out_name]))
            prev = out_name
    initializers.append(tensor("resnetv24_dense0_weight", [1000, 2048]))
    initializers.append(tensor("resnetv24_dense0_bias", [1000]))
    nodes.append(
        node("Gemm", "resnetv24_dense0",
             [prev, "resnetv24_dense0_weight", "resnetv24_dense0_bias"],
             ["resnetv24_dense0_fwd"])
    )
    g = graph("resnetv24", initializers, nodes, ["data"], ["resnetv24_dense0_fwd"])
    return model(g, "mxnet", opset=7)


def fixture_min() -> bytes:
    """Smallest useful model: one 1x1 FLOAT weight (4 bytes) plus a bias that
    the default rank filter drops. Exercises unpacked dims and float_data."""
    initializers = [
        tensor("l0", [1, 1], packed_dims=False),
        tensor("b0", [1], payload="float_data"),
    ]
    nodes = [node("MatMul", "n0", ["x", "l0"], ["y"])]
    g = graph("fixture-min", initializers, nodes, ["x"], ["y"])
    return model(g, "fixture", opset=13, ir_version=7)


# --- reference workload ------------------------------------------------------


def resnet50_reference_workload() -> str:
    """DATA-parallel reference: same 54 layers, but in stages 3 and 4 the
    opening block lists the downsample projection first, the order the
    simulator's published example uses (stages 1 and 2 agree with the
    export order). Sizes are float32 bytes = 4 * prod(dims)."""
    rows: list[tuple[str, int]] = [("resnet-conv0-weight", 4 * 64 * 3 * 7 * 7)]
    stages = [
        resnet50_stage(64, 64, 256, 3),
        resnet50_stage(256, 128, 512, 4),
        resnet50_stage(512, 256, 1024, 6),
        resnet50_stage(1024, 512, 2048, 3),
    ]
    for s, shapes in enumerate(stages, start=1):
        if s >= 3:
            # rotate the opening block: downsample(3) ahead of 0,1,2
            reordered = [shapes[3], shapes[0], shapes[1], shapes[2]] + shapes[4:]
        else:
            reordered = shapes
        for k, dims in enumerate(reordered):
            size = 4
            for d in dims:
                size *= d
            rows.append((f"resnet-stage{s}-conv{k}-weight", size))
    rows.append(("resnet-dense0-weight", 4 * 1000 * 2048))
    lines = ["DATA", str(len(rows))]
    for name, size in rows:
        lines.append(f"{name} -1 5 NONE 0 5 NONE 0 5 ALLREDUCE {size} 1")
    return "\n".join(lines) + "\n"


# --- output ------------------------------------------------------------------

ZOO_URLS = {
    "vgg16": "https://github.com/onnx/models/raw/main/validated/vision/"
             "classification/vgg/model/vgg16-7.onnx",
    "vgg19": "https://github.com/onnx/models/raw/main/validated/vision/"
             "classification/vgg/model/vgg19-7.onnx",
    "resnet50": "https://github.com/onnx/models/raw/main/validated/vision/"
                "classification/resnet/model/resnet50-v2-7.onnx",
}


def main() -> int:
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent
    data_dir = root / "tests" / "data"
    data_dir.mkdir(parents=True, exist_ok=True)

    fixtures = {
        "vgg16": vgg16(),
        "vgg19": vgg19(),
        "resnet50": resnet50(),
        "fixture_min": fixture_min(),
    }
    manifest = {}
    for name, blob in fixtures.items():
        path = data_dir / f"{name}.onnx"
        path.write_bytes(blob)
        digest = hashlib.sha256(blob).hexdigest()
        print(f"{path}  {len(blob)} bytes  sha256 {digest}")
        if name in ZOO_URLS:
            manifest[name] = {
                "url": ZOO_URLS[name],
                "sha256": digest,
                "size_bytes": len(blob),
            }

    ref = resnet50_reference_workload()
    ref_path = data_dir / "resnet50_ref_workload.txt"
    ref_path.write_text(ref, newline="\n")
    print(f"{ref_path}  {len(ref.splitlines()) - 2} layers")

    manifest_dir = root / "data"
    manifest_dir.mkdir(parents=True, exist_ok=True)
    manifest_path = manifest_dir / "zoo_manifest.json"
    manifest_path.write_text(
        json.dumps(dict(sorted(manifest.items())), indent=2) + "\n"
    )
    print(f"{manifest_path}  {len(manifest)} entries")
    return 0


if __name__ == "__main__":
    sys.exit(main())
