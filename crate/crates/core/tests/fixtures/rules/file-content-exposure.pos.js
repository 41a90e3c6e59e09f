const fs = require('fs');

function serve(req, res) {
  const body = fs.readFileSync('./public/' + req.query.name);
  res.send(body);
}
