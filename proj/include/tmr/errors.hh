#pragma once

#include <stdexcept>
#include <string>

namespace tmr
{
  /* bad input data: encoding, alignment, unreadable files */
  class IngestionError : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  /* invalid retrieval or command parameters */
  class ConfigError : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  /* persisted index that cannot be read by this build */
  class IndexFormatError : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };
}
