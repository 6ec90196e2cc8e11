/*
 * Copyright 2026 The v2xcms Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef V2XCMS_ERRORS_HPP
#define V2XCMS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace v2xcms {

// Base for every error raised by this library. Verification APIs report
// failures through their return values; exceptions are reserved for inputs
// that cannot be processed at all (truncation, malformed encodings, protocol
// violations).
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// ---- decoding -------------------------------------------------------------

class DecodeError : public Error {
  public:
    using Error::Error;
};

class Truncated : public DecodeError {
  public:
    explicit Truncated(const std::string& what) : DecodeError("truncated input while reading " + what) {}
};

class TrailingBytes : public DecodeError {
  public:
    TrailingBytes() : DecodeError("trailing bytes after complete structure") {}
};

class MalformedPoint : public DecodeError {
  public:
    explicit MalformedPoint(const std::string& why) : DecodeError("malformed point: " + why) {}
};

class UnknownEnum : public DecodeError {
  public:
    UnknownEnum(const std::string& field, unsigned value)
        : DecodeError("unknown value " + std::to_string(value) + " for " + field) {}
};

// ---- crypto ---------------------------------------------------------------

class CryptoError : public Error {
  public:
    using Error::Error;
};

class TagMismatch : public CryptoError {
  public:
    TagMismatch() : CryptoError("authentication tag mismatch") {}
};

class OutOfRange : public CryptoError {
  public:
    explicit OutOfRange(const std::string& what) : CryptoError(what + " out of range") {}
};

class PayloadTooLarge : public Error {
  public:
    explicit PayloadTooLarge(size_t size)
        : Error("payload of " + std::to_string(size) + " bytes exceeds the 16-bit length limit") {}
};

class InvariantViolation : public Error {
  public:
    using Error::Error;
};

// ---- certificate handling -------------------------------------------------

class CertError : public Error {
  public:
    using Error::Error;
};

class WrongCertType : public CertError {
  public:
    using CertError::CertError;
};

class KeyCertMismatch : public CertError {
  public:
    KeyCertMismatch() : CertError("private key does not match certificate public key") {}
};

class IssuerExpired : public CertError {
  public:
    IssuerExpired() : CertError("issuer validity does not cover requested period") {}
};

// ---- protocol flows -------------------------------------------------------

class FlowError : public Error {
  public:
    using Error::Error;
};

class UnregisteredCanonicalKey : public FlowError {
  public:
    UnregisteredCanonicalKey() : FlowError("canonical key is not registered with the issuer") {}
};

class BadRequestSignature : public FlowError {
  public:
    BadRequestSignature() : FlowError("request signature did not verify") {}
};

class BadInnerPoP : public FlowError {
  public:
    BadInnerPoP() : FlowError("inner proof-of-possession signature did not verify") {}
};

class UnknownSubscriber : public FlowError {
  public:
    UnknownSubscriber() : FlowError("subscriber identity is not provisioned") {}
};

class BadAuthResponse : public FlowError {
  public:
    BadAuthResponse() : FlowError("challenge response does not match expectation") {}
};

class ChannelAuthFailure : public FlowError {
  public:
    ChannelAuthFailure() : FlowError("secure channel frame failed authentication") {}
};

class EnrollmentChainInvalid : public FlowError {
  public:
    explicit EnrollmentChainInvalid(const std::string& why) : FlowError("enrollment credential rejected: " + why) {}
};

class DownloadBeforeAck : public FlowError {
  public:
    DownloadBeforeAck() : FlowError("download requested for a batch that was never acknowledged") {}
};

class BadPoP : public FlowError {
  public:
    BadPoP() : FlowError("proof-of-possession did not verify") {}
};

class ValidationRejected : public FlowError {
  public:
    explicit ValidationRejected(const std::string& why) : FlowError("validation authority rejected request: " + why) {}
};

// ---- benchmarks and CLI ---------------------------------------------------

class UnknownTarget : public Error {
  public:
    explicit UnknownTarget(const std::string& what) : Error("unknown benchmark target: " + what) {}
};

class MissingPkiState : public Error {
  public:
    explicit MissingPkiState(const std::string& what) : Error("missing PKI state: " + what) {}
};

}  // namespace v2xcms

#endif
