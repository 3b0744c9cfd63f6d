// Wire types mirroring the session service's JSON payloads.
export {};
