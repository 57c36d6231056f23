#ifndef ARTIFACT_ERRORS_HPP
#define ARTIFACT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace artifact {

/// Base class for all recoverable errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// image I/O and preprocessing
class MalformedHeader : public Error { public: using Error::Error; };
class UnsupportedMaxval : public Error { public: using Error::Error; };
class TruncatedPayload : public Error { public: using Error::Error; };
class CropTooLarge : public Error { public: using Error::Error; };
class EvenWindow : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };
class EmptyFrameList : public Error { public: using Error::Error; };

// matching
class ImageTooSmall : public Error { public: using Error::Error; };

// cloning
class TileLargerThanImage : public Error { public: using Error::Error; };

// evaluation
class CorpusError : public Error { public: using Error::Error; };
class CorpusTooSmall : public Error { public: using Error::Error; };
class EmptyScores : public Error { public: using Error::Error; };
class GridMismatch : public Error { public: using Error::Error; };

} // namespace artifact

#endif
